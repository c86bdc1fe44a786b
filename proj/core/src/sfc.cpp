// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <bit>
#include <cstdint>

#include "mapkit/error.hpp"
#include "mapkit/mapping.hpp"

namespace mapkit {
namespace {

bool in_bounds(const Coord& c, const Dims& d) {
    return c.x >= 0 && c.x < d.x && c.y >= 0 && c.y < d.y && c.z >= 0 && c.z < d.z;
}

void require_power_of_two(Dims dims, std::string_view curve) {
    for (int side : {dims.x, dims.y, dims.z}) {
        if (side <= 0 || !std::has_single_bit(static_cast<unsigned>(side))) {
            throw InputError(std::string(curve) + " curve needs power-of-two sides, got " +
                             to_string(dims));
        }
    }
}

std::vector<Coord> sweep_order(Dims d) {
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(d.volume()));
    for (int z = 0; z < d.z; ++z)
        for (int y = 0; y < d.y; ++y)
            for (int x = 0; x < d.x; ++x) out.push_back(Coord{x, y, z});
    return out;
}

std::vector<Coord> scan_order(Dims d) {
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(d.volume()));
    int row = 0;  // rows visited so far; x runs forward on even rows
    for (int z = 0; z < d.z; ++z) {
        for (int j = 0; j < d.y; ++j) {
            const int y = (z % 2 == 0) ? j : d.y - 1 - j;
            for (int i = 0; i < d.x; ++i) {
                const int x = (row % 2 == 0) ? i : d.x - 1 - i;
                out.push_back(Coord{x, y, z});
            }
            ++row;
        }
    }
    return out;
}

// Skilling's transpose construction ("Programming the Hilbert curve", 2004).
std::array<std::uint32_t, 3> hilbert_axes(std::uint64_t index, int bits) {
    std::array<std::uint32_t, 3> X{0, 0, 0};
    for (int b = 0; b < bits; ++b) {
        for (int k = 0; k < 3; ++k) {
            const int pos = 3 * b + (2 - k);
            if ((index >> pos) & 1u) X[static_cast<std::size_t>(k)] |= (1u << b);
        }
    }
    if (bits == 0) return X;
    const std::uint32_t N = 2u << (bits - 1);
    // Gray decode
    std::uint32_t t = X[2] >> 1;
    for (int i = 2; i > 0; --i) X[static_cast<std::size_t>(i)] ^= X[static_cast<std::size_t>(i - 1)];
    X[0] ^= t;
    // Undo excess work
    for (std::uint32_t Q = 2; Q != N; Q <<= 1) {
        const std::uint32_t P = Q - 1;
        for (int i = 2; i >= 0; --i) {
            auto& xi = X[static_cast<std::size_t>(i)];
            if (xi & Q) {
                X[0] ^= P;
            } else {
                t = (X[0] ^ xi) & P;
                X[0] ^= t;
                xi ^= t;
            }
        }
    }
    return X;
}

std::vector<Coord> hilbert_order(Dims d) {
    require_power_of_two(d, "hilbert");
    const int side = d.max_side();
    const int bits = std::countr_zero(static_cast<unsigned>(side));
    const std::uint64_t cells = std::uint64_t{1} << (3 * bits);
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(d.volume()));
    for (std::uint64_t i = 0; i < cells; ++i) {
        const auto X = hilbert_axes(i, bits);
        const Coord c{static_cast<int>(X[2]), static_cast<int>(X[1]), static_cast<int>(X[0])};
        if (in_bounds(c, d)) out.push_back(c);
    }
    return out;
}

std::vector<Coord> gray_order(Dims d) {
    require_power_of_two(d, "gray");
    const std::array<int, 3> bits = {std::countr_zero(static_cast<unsigned>(d.x)),
                                     std::countr_zero(static_cast<unsigned>(d.y)),
                                     std::countr_zero(static_cast<unsigned>(d.z))};
    const int total_bits = bits[0] + bits[1] + bits[2];
    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(d.volume()));
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << total_bits); ++i) {
        const std::uint64_t g = i ^ (i >> 1);
        std::array<int, 3> v{0, 0, 0};
        std::array<int, 3> used{0, 0, 0};
        int dim = 0;
        for (int pos = 0; pos < total_bits; ++pos) {
            while (used[static_cast<std::size_t>(dim)] == bits[static_cast<std::size_t>(dim)]) {
                dim = (dim + 1) % 3;
            }
            if ((g >> pos) & 1u) v[static_cast<std::size_t>(dim)] |= 1 << used[static_cast<std::size_t>(dim)];
            ++used[static_cast<std::size_t>(dim)];
            dim = (dim + 1) % 3;
        }
        out.push_back(Coord{v[0], v[1], v[2]});
    }
    return out;
}

// Serpentine Peano curve: base-3 digits of the index, most significant first,
// dealt round-robin so the least significant digit drives x. A digit is
// reflected (d -> 2 - d) when the preceding digits of the other axes sum to
// an odd number.
std::vector<Coord> peano_order(Dims d) {
    int levels = 0;
    int side = 1;
    while (side < d.max_side()) {
        side *= 3;
        ++levels;
    }
    const int digits = 3 * levels;
    std::uint64_t cells = 1;
    for (int i = 0; i < digits; ++i) cells *= 3;

    std::vector<Coord> out;
    out.reserve(static_cast<std::size_t>(d.volume()));
    std::vector<int> digit(static_cast<std::size_t>(digits));
    for (std::uint64_t i = 0; i < cells; ++i) {
        std::uint64_t t = i;
        for (int p = digits - 1; p >= 0; --p) {
            digit[static_cast<std::size_t>(p)] = static_cast<int>(t % 3);
            t /= 3;
        }
        std::array<int, 3> coord{0, 0, 0};
        std::array<int, 3> parity{0, 0, 0};  // digit sum per axis so far
        int all = 0;
        for (int p = 0; p < digits; ++p) {
            const int k = (digits - 1 - p) % 3;
            const int others = all - parity[static_cast<std::size_t>(k)];
            const int dg = digit[static_cast<std::size_t>(p)];
            const int v = (others % 2 == 0) ? dg : 2 - dg;
            coord[static_cast<std::size_t>(k)] = coord[static_cast<std::size_t>(k)] * 3 + v;
            parity[static_cast<std::size_t>(k)] += dg;
            all += dg;
        }
        const Coord c{coord[0], coord[1], coord[2]};
        if (in_bounds(c, d)) out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<Coord> curve_order(Curve curve, Dims dims) {
    if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) {
        throw InputError("curve dimensions must be positive, got " + to_string(dims));
    }
    switch (curve) {
        case Curve::sweep: return sweep_order(dims);
        case Curve::scan: return scan_order(dims);
        case Curve::hilbert: return hilbert_order(dims);
        case Curve::gray: return gray_order(dims);
        case Curve::peano: return peano_order(dims);
    }
    return {};
}

}  // namespace mapkit
