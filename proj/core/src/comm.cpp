// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/comm.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mapkit/error.hpp"
#include "mapkit/format.hpp"
#include "mapkit/log.hpp"

namespace mapkit {

std::string_view to_string(MatrixKind kind) {
    return kind == MatrixKind::count ? "count" : "volume";
}

MatrixKind parse_matrix_kind(std::string_view name) {
    if (name == "count") return MatrixKind::count;
    if (name == "volume" || name == "size") return MatrixKind::volume;
    throw InputError("unknown matrix kind '" + std::string(name) + "' (expected count or volume)");
}

CommMatrix::CommMatrix(int n, MatrixKind kind) : n_(n), kind_(kind) {
    if (n < 0) {
        throw InputError("matrix size must be non-negative");
    }
    entries_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
}

void CommMatrix::set(int sender, int receiver, double value) {
    if (sender < 0 || sender >= n_ || receiver < 0 || receiver >= n_) {
        throw InputError("matrix index out of range");
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw InputError("matrix entries must be finite and non-negative");
    }
    entries_[index(sender, receiver)] = value;
}

void CommMatrix::add(int sender, int receiver, double value) {
    set(sender, receiver, (*this)(sender, receiver) + value);
}

std::span<const double> CommMatrix::row(int sender) const {
    return std::span<const double>(entries_).subspan(index(sender, 0),
                                                     static_cast<std::size_t>(n_));
}

double CommMatrix::sum() const {
    double s = 0.0;
    for (double v : entries_) s += v;
    return s;
}

bool CommMatrix::all_zero() const {
    for (double v : entries_) {
        if (v != 0.0) return false;
    }
    return true;
}

std::vector<double> CommMatrix::totals() const {
    std::vector<double> t(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double v = (*this)(i, j);
            t[static_cast<std::size_t>(i)] += v;
            t[static_cast<std::size_t>(j)] += v;
        }
    }
    return t;
}

bool CommMatrix::zero_diagonal() {
    bool changed = false;
    for (int i = 0; i < n_; ++i) {
        double& d = entries_[index(i, i)];
        if (d != 0.0) {
            d = 0.0;
            changed = true;
        }
    }
    return changed;
}

CommMatrix parse_matrix_csv(std::istream& in, MatrixKind kind, std::string_view source) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    const std::string where(source);
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        std::vector<double> row;
        for (auto cell : split(text, ',')) {
            cell = trim(cell);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
                !std::isfinite(v)) {
                throw InputError(where + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                                 std::string(cell) + "'");
            }
            if (v < 0.0) {
                throw InputError(where + ":" + std::to_string(line_no) + ": negative entry " +
                                 std::string(cell));
            }
            if (kind == MatrixKind::count && v != std::floor(v)) {
                throw InputError(where + ":" + std::to_string(line_no) +
                                 ": count entries must be integers, got " + std::string(cell));
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InputError(where + ":" + std::to_string(line_no) + ": ragged row (" +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(rows.front().size()) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw InputError(where + ": empty matrix");
    }
    const int n = static_cast<int>(rows.size());
    if (rows.front().size() != rows.size()) {
        throw InputError(where + ": matrix is not square (" + std::to_string(n) + " rows, " +
                         std::to_string(rows.front().size()) + " columns)");
    }
    CommMatrix m(n, kind);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m.set(i, j, rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
    }
    if (m.zero_diagonal()) {
        warn(where + ": non-zero diagonal entries ignored (self-communication)");
    }
    return m;
}

CommMatrix load_matrix_csv(const std::filesystem::path& path, MatrixKind kind) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open matrix file " + path.string());
    }
    return parse_matrix_csv(in, kind, path.string());
}

void write_matrix_csv(const CommMatrix& m, std::ostream& out) {
    for (int i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.size(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

double split_fraction(const CommMatrix& m, int k) {
    const int n = m.size();
    if (k <= 0 || n % k != 0) {
        throw InputError("split fraction block count k=" + std::to_string(k) +
                         " does not divide n=" + std::to_string(n));
    }
    const double total = m.sum();
    if (total == 0.0) {
        return 0.0;
    }
    const int block = n / k;
    double inside = 0.0;
    for (int i = 0; i < n; ++i) {
        const int b = i / block;
        for (int j = b * block; j < (b + 1) * block; ++j) {
            inside += m(i, j);
        }
    }
    return inside / total;
}

MetricsReport compute_metrics(const CommMatrix& m, std::span<const int> ks) {
    const int n = m.size();
    if (n < 1) {
        throw InputError("metrics need at least one process");
    }
    for (int k : ks) {
        if (k <= 0 || n % k != 0) {
            throw InputError("split fraction block count k=" + std::to_string(k) +
                             " does not divide n=" + std::to_string(n));
        }
    }

    MetricsReport r;
    r.sum = m.sum();
    r.ca = r.sum / (static_cast<double>(n) * static_cast<double>(n));
    if (r.sum == 0.0) {
        warn("all-zero communication matrix; normalized metrics reported as 0");
        for (int k : ks) r.sp[k] = 0.0;
        return r;
    }

    const auto totals = m.totals();
    double max_total = 0.0;
    double mean_total = 0.0;
    for (double t : totals) {
        max_total = std::max(max_total, t);
        mean_total += t;
    }
    mean_total /= n;
    r.cb = 1.0 - mean_total / max_total;

    double spread = 0.0;
    double neighbor = 0.0;
    double max_entry = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = m(i, j);
            spread += v * std::abs(i - j);
            if (std::abs(i - j) == 1) neighbor += v;
            max_entry = std::max(max_entry, v);
        }
    }
    r.cc = n > 1 ? spread / (r.sum * (n - 1)) : 0.0;
    r.nbc = neighbor / r.sum;

    double variance_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto row = m.row(i);
        double mean = 0.0;
        for (double v : row) mean += v / max_entry;
        mean /= n;
        double var = 0.0;
        for (double v : row) {
            const double d = v / max_entry - mean;
            var += d * d;
        }
        variance_sum += var / n;
    }
    r.ch = variance_sum / n;

    for (int k : ks) r.sp[k] = split_fraction(m, k);
    return r;
}

std::string MetricsReport::to_json() const {
    nlohmann::json j;
    j["sum"] = sum;
    j["ca"] = ca;
    j["cb"] = cb;
    j["cc"] = cc;
    j["ch"] = ch;
    j["nbc"] = nbc;
    nlohmann::json spj = nlohmann::json::object();
    for (const auto& [k, v] : sp) spj[std::to_string(k)] = v;
    j["sp"] = spj;
    return j.dump(2);
}

std::string MetricsReport::to_csv() const {
    std::ostringstream out;
    out << "metric,value\n"
        << "sum," << format_double(sum) << '\n'
        << "CA," << format_double(ca) << '\n'
        << "CB," << format_double(cb) << '\n'
        << "CC," << format_double(cc) << '\n'
        << "CH," << format_double(ch) << '\n'
        << "NBC," << format_double(nbc);
    for (const auto& [k, v] : sp) {
        out << "\nSP(" << k << ")," << format_double(v);
    }
    out << '\n';
    return out.str();
}

}  // namespace mapkit
