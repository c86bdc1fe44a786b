// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mapkit {

/// count: number of point-to-point messages; volume: Bytes exchanged.
enum class MatrixKind { count, volume };

std::string_view to_string(MatrixKind kind);
/// Accepts "count", "volume" and "size".
MatrixKind parse_matrix_kind(std::string_view name);

/// Square, non-negative process-logical communication matrix. Row = sender,
/// column = receiver.
class CommMatrix {
public:
    CommMatrix() = default;
    CommMatrix(int n, MatrixKind kind);

    int size() const { return n_; }
    MatrixKind kind() const { return kind_; }

    double operator()(int sender, int receiver) const { return entries_[index(sender, receiver)]; }
    void set(int sender, int receiver, double value);
    void add(int sender, int receiver, double value);

    /// M[i][j] + M[j][i]
    double symmetric(int i, int j) const { return (*this)(i, j) + (*this)(j, i); }

    std::span<const double> row(int sender) const;
    std::span<const double> entries() const { return entries_; }

    double sum() const;
    bool all_zero() const;

    /// Per-process send + receive totals.
    std::vector<double> totals() const;

    /// Zeroes the diagonal, returns true if anything changed.
    bool zero_diagonal();

    friend bool operator==(const CommMatrix&, const CommMatrix&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(j);
    }

    int n_ = 0;
    MatrixKind kind_ = MatrixKind::count;
    std::vector<double> entries_;
};

/// n lines of n comma-separated non-negative numbers; blank lines and lines
/// starting with '#' are skipped. Non-zero diagonal entries are dropped with a
/// warning.
CommMatrix parse_matrix_csv(std::istream& in, MatrixKind kind,
                            std::string_view source = "<stream>");
CommMatrix load_matrix_csv(const std::filesystem::path& path, MatrixKind kind);
void write_matrix_csv(const CommMatrix& m, std::ostream& out);

struct MetricsReport {
    double sum = 0.0;
    double ca = 0.0;   // amount
    double cb = 0.0;   // balance
    double cc = 0.0;   // centrality
    double ch = 0.0;   // heterogeneity
    double nbc = 0.0;  // neighbor fraction
    std::map<int, double> sp;  // split fraction per block count k

    std::string to_json() const;
    /// Two-column "metric,value" table, sum first.
    std::string to_csv() const;
};

/**
 * Application communication metrics.
 *
 * With T_i the send+receive total of process i and S the matrix sum:
 *   CA  = S / n^2
 *   CB  = 1 - mean(T) / max(T)
 *   CC  = sum M[i][j] |i-j| / (S (n-1))
 *   CH  = mean over rows of the population variance of M[i][.] / max(M)
 *   NBC = sum_{|i-j|=1} M[i][j] / S
 *   SP(k) = split_fraction(m, k)
 * Metrics that need normalization are 0 (with a warning) on an all-zero
 * matrix. Every k must divide n.
 */
MetricsReport compute_metrics(const CommMatrix& m, std::span<const int> ks);

/// Fraction of communication inside the k diagonal blocks of size n/k.
double split_fraction(const CommMatrix& m, int k);

}  // namespace mapkit
