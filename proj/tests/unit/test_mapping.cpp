// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "mapkit/error.hpp"
#include "mapkit/mapping.hpp"
#include "mapkit/quality.hpp"
#include "oracles.hpp"

namespace mapkit {
namespace {

const Dims k444{4, 4, 4};

bool is_permutation(const Mapping& m, int n) {
    if (m.size() != n) return false;
    std::set<int> nodes(m.assignment().begin(), m.assignment().end());
    return static_cast<int>(nodes.size()) == n && *nodes.begin() == 0 && *nodes.rbegin() == n - 1;
}

CommMatrix two_cliques() {
    CommMatrix m(8, MatrixKind::volume);
    // ranks {0,2,4,6} and {1,3,5,7}, so rank order gives no hint
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (i != j && i % 2 == j % 2) m.set(i, j, 100);
    m.set(0, 1, 1);
    return m;
}

TEST(Algorithms, NamesRoundTrip) {
    ASSERT_EQ(all_algorithms().size(), 12u);
    for (Algorithm a : all_algorithms()) EXPECT_EQ(parse_algorithm(to_string(a)), a);
    EXPECT_EQ(parse_algorithm("FHgreedy"), Algorithm::fhgreedy);
    EXPECT_EQ(parse_algorithm("fggreedy"), Algorithm::fhgreedy);
    EXPECT_EQ(parse_algorithm("greedyALLC"), Algorithm::greedy_allc);
    EXPECT_THROW(parse_algorithm("annealing"), InputError);
    int oblivious = 0;
    for (Algorithm a : all_algorithms()) oblivious += is_oblivious(a);
    EXPECT_EQ(oblivious, 5);
    EXPECT_TRUE(is_seeded(Algorithm::bokhari));
    EXPECT_TRUE(is_seeded(Algorithm::greedy));
    EXPECT_TRUE(is_seeded(Algorithm::fhgreedy));
    EXPECT_FALSE(is_seeded(Algorithm::pacmap));
}

TEST(Mapping, RejectsNonBijection) {
    EXPECT_THROW(Mapping({0, 0}, TopologyKind::mesh, Dims{2, 1, 1}), InputError);
    EXPECT_THROW(Mapping({0, 2}, TopologyKind::mesh, Dims{2, 1, 1}), InputError);
    EXPECT_THROW(Mapping({0}, TopologyKind::mesh, Dims{2, 1, 1}), InputError);
    const Mapping ok({1, 0}, TopologyKind::mesh, Dims{2, 1, 1});
    EXPECT_EQ(ok.inverse(), (std::vector<int>{1, 0}));
}

TEST(Algorithms, AllYieldPermutationsOnAllTopologies) {
    std::mt19937_64 rng(99);
    for (TopologyKind kind : {TopologyKind::mesh, TopologyKind::torus, TopologyKind::haec_box}) {
        const auto t = Topology::build(kind, k444);
        for (int trial = 0; trial < 3; ++trial) {
            const CommMatrix m = oracle::random_matrix(64, MatrixKind::count, rng, 0.1);
            for (Algorithm a : all_algorithms()) {
                const Mapping map = generate_mapping(a, &m, t, 42);
                EXPECT_TRUE(is_permutation(map, 64)) << to_string(a);
                EXPECT_EQ(map.meta().algorithm, to_string(a));
            }
        }
    }
}

TEST(Algorithms, AllZeroMatrixStillBijective) {
    const auto t = Topology::build(TopologyKind::torus, Dims{2, 2, 2});
    const CommMatrix zero(8, MatrixKind::count);
    for (Algorithm a : all_algorithms()) EXPECT_TRUE(is_permutation(generate_mapping(a, &zero, t), 8)) << to_string(a);
}

TEST(Algorithms, SeededAreReproducible) {
    std::mt19937_64 rng(1);
    const CommMatrix m = oracle::random_matrix(64, MatrixKind::volume, rng);
    const auto t = Topology::build(TopologyKind::torus, k444);
    for (Algorithm a : {Algorithm::bokhari, Algorithm::greedy, Algorithm::fhgreedy}) {
        const Mapping x = generate_mapping(a, &m, t, 42);
        const Mapping y = generate_mapping(a, &m, t, 42);
        EXPECT_EQ(x, y) << to_string(a);
        EXPECT_EQ(x.meta().seed, std::optional<std::uint64_t>(42));
        EXPECT_EQ(x.meta().matrix, std::optional<MatrixKind>(MatrixKind::volume));
    }
}

TEST(Algorithms, AwareNeedMatrix) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 2, 2});
    EXPECT_THROW(generate_mapping(Algorithm::pacmap, nullptr, t), InputError);
    EXPECT_NO_THROW(generate_mapping(Algorithm::hilbert, nullptr, t));
    const CommMatrix wrong(4, MatrixKind::count);
    EXPECT_THROW(generate_mapping(Algorithm::greedy, &wrong, t), InputError);
}

TEST(Bokhari, ZeroMatrixLeavesInitial) {
    const auto t = Topology::build(TopologyKind::mesh, k444);
    const Mapping initial = sfc_map(Curve::hilbert, t);
    const Mapping out = map_bokhari(CommMatrix(64, MatrixKind::count), t, initial);
    EXPECT_TRUE(std::equal(out.assignment().begin(), out.assignment().end(), initial.assignment().begin()));
}

TEST(Bokhari, RingOnSquareReachesOptimum) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 2, 1});
    const CommMatrix ring = oracle::ring_matrix(4);
    const Mapping out = map_bokhari(ring, t, sfc_map(Curve::sweep, t));
    EXPECT_EQ(bokhari_cardinality(ring, out, t), 4);
}

TEST(Bokhari, NeverWorseThanInitial) {
    std::mt19937_64 rng(17);
    for (TopologyKind kind : {TopologyKind::mesh, TopologyKind::torus, TopologyKind::haec_box}) {
        const auto t = Topology::build(kind, k444);
        for (int trial = 0; trial < 3; ++trial) {
            const CommMatrix m = oracle::random_matrix(64, MatrixKind::count, rng, 0.05);
            for (Curve c : {Curve::sweep, Curve::peano, Curve::gray}) {
                const Mapping initial = sfc_map(c, t);
                const Mapping out = map_bokhari(m, t, initial, 4, trial);
                EXPECT_GE(bokhari_cardinality(m, out, t), bokhari_cardinality(m, initial, t));
            }
        }
    }
}

TEST(TopoAware, SingleProcess) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{1, 1, 1});
    const Mapping m = map_topo_aware(CommMatrix(1, MatrixKind::count), t);
    EXPECT_EQ(m.node_of(0), 0);
}

TEST(TopoAware, CliquesOccupyFacesAtOptimum) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 2, 2});
    const CommMatrix m = two_cliques();
    const Mapping map = map_topo_aware(m, t);
    EXPECT_EQ(dilation(m, map, t), oracle::optimal_dilation(m, TopologyKind::mesh, Dims{2, 2, 2}));
    for (int parity : {0, 1}) {
        std::set<int> xs, ys, zs;
        for (int r = parity; r < 8; r += 2) {
            const Coord c = t.coord(map.node_of(r));
            xs.insert(c.x);
            ys.insert(c.y);
            zs.insert(c.z);
        }
        EXPECT_TRUE(xs.size() == 1 || ys.size() == 1 || zs.size() == 1) << "clique " << parity << " not on a face";
    }
}

TEST(Greedy, TwoProcessesAreAdjacent) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 1, 1});
    CommMatrix m(2, MatrixKind::count);
    m.set(0, 1, 100);
    for (Algorithm a : {Algorithm::greedy, Algorithm::fhgreedy, Algorithm::greedy_allc})
        EXPECT_EQ(dilation(m, generate_mapping(a, &m, t), t), 100) << to_string(a);
}

TEST(Greedy, AllcBeatsSweepOnRing) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 2, 2});
    const CommMatrix ring = oracle::ring_matrix(8);
    const double allc = dilation(ring, map_greedy_allc(ring, t), t);
    EXPECT_LE(allc, dilation(ring, sfc_map(Curve::sweep, t), t));
    EXPECT_GE(allc, oracle::optimal_dilation(ring, TopologyKind::mesh, Dims{2, 2, 2}));
}

TEST(Greedy, AllcStartsOnMostConnectedNode) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{3, 3, 1});
    CommMatrix m(9, MatrixKind::count);
    m.set(5, 6, 50);
    m.set(6, 5, 50);
    m.set(1, 2, 3);
    const Mapping map = map_greedy_allc(m, t);
    // centre (1,1,0) has degree 4; the heavier of the heaviest pair (tie -> 5) goes there
    EXPECT_EQ(map.node_of(5), t.node_id(Coord{1, 1, 0}));
    EXPECT_EQ(t.distance(map.node_of(5), map.node_of(6)), 1);
}

TEST(Bipartition, FirstCutSeparatesHeavyBlocks) {
    const auto t = Topology::build(TopologyKind::mesh, k444);
    CommMatrix m(64, MatrixKind::volume);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> w(1, 50);
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
            if (i != j && (i < 32) == (j < 32)) m.set(i, j, w(rng));
    const Mapping map = map_bipartition(m, t);
    std::set<int> halves;
    for (int r = 0; r < 32; ++r) halves.insert(t.coord(map.node_of(r)).x < 2);
    EXPECT_EQ(halves.size(), 1u);
}

TEST(Bipartition, RingOnSquareIsOptimal) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 2, 1});
    const CommMatrix ring = oracle::ring_matrix(4);
    EXPECT_EQ(dilation(ring, map_bipartition(ring, t), t),
              oracle::optimal_dilation(ring, TopologyKind::mesh, Dims{2, 2, 1}));
}

TEST(PacMap, StarCentreOnLowestCentralNode) {
    const auto t = Topology::build(TopologyKind::mesh, k444);
    CommMatrix star(64, MatrixKind::count);
    for (int j = 0; j < 64; ++j)
        if (j != 3) star.set(3, j, 10);
    const Mapping map = map_pacmap(star, t);
    EXPECT_EQ(t.coord(map.node_of(3)), (Coord{1, 1, 1}));
}

TEST(PacMap, ZeroMatrixCentresRankZero) {
    const auto t = Topology::build(TopologyKind::mesh, k444);
    const Mapping map = map_pacmap(CommMatrix(64, MatrixKind::count), t);
    EXPECT_EQ(map.node_of(0), t.node_id(Coord{1, 1, 1}));
    EXPECT_TRUE(is_permutation(map, 64));
}

TEST(PacMap, TwoProcesses) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{2, 1, 1});
    CommMatrix m(2, MatrixKind::count);
    m.set(0, 1, 3);
    m.set(1, 0, 4);
    EXPECT_EQ(dilation(m, map_pacmap(m, t), t), 7);
}

TEST(Algorithms, AwareNeverBeatBruteForceFloor) {
    std::mt19937_64 rng(23);
    for (Dims d : {Dims{2, 2, 1}, Dims{2, 2, 2}}) {
        const auto t = Topology::build(TopologyKind::mesh, d);
        for (int trial = 0; trial < 3; ++trial) {
            const CommMatrix m = oracle::random_matrix(d.volume(), MatrixKind::count, rng, 0.5, 9);
            const double opt = oracle::optimal_dilation(m, TopologyKind::mesh, d);
            for (Algorithm a : all_algorithms()) {
                if (is_oblivious(a)) continue;
                EXPECT_GE(dilation(m, generate_mapping(a, &m, t), t), opt) << to_string(a);
            }
        }
    }
}

}  // namespace
}  // namespace mapkit
