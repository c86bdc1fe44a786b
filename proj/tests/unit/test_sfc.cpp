// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "mapkit/error.hpp"
#include "mapkit/mapping.hpp"
#include "oracles.hpp"

namespace mapkit {
namespace {

int manhattan(Coord a, Coord b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z); }

int coords_differing(Coord a, Coord b) { return (a.x != b.x) + (a.y != b.y) + (a.z != b.z); }

void expect_covers_grid(const std::vector<Coord>& order, Dims d) {
    ASSERT_EQ(static_cast<int>(order.size()), d.volume());
    std::set<std::tuple<int, int, int>> seen;
    for (const Coord& c : order) {
        ASSERT_TRUE(c.x >= 0 && c.x < d.x && c.y >= 0 && c.y < d.y && c.z >= 0 && c.z < d.z);
        seen.insert({c.x, c.y, c.z});
    }
    EXPECT_EQ(static_cast<int>(seen.size()), d.volume());
}

TEST(Sfc, SweepExamples) {
    const auto t = Topology::build(TopologyKind::mesh, Dims{4, 4, 4});
    const Mapping m = sfc_map(Curve::sweep, t);
    EXPECT_EQ(t.coord(m.node_of(0)), (Coord{0, 0, 0}));
    EXPECT_EQ(t.coord(m.node_of(5)), (Coord{1, 1, 0}));
    EXPECT_EQ(t.coord(m.node_of(16)), (Coord{0, 0, 1}));
    EXPECT_EQ(m.meta().algorithm, "sweep");
    EXPECT_FALSE(m.meta().matrix.has_value());
    EXPECT_FALSE(m.meta().seed.has_value());
}

TEST(Sfc, SweepAdjacentExceptAtRowBoundaries) {
    const auto order = curve_order(Curve::sweep, Dims{4, 4, 4});
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (i % 4 == 0) continue;
        EXPECT_EQ(manhattan(order[i - 1], order[i]), 1) << i;
    }
}

TEST(Sfc, ScanSnakes) {
    const auto order = curve_order(Curve::scan, Dims{4, 4, 4});
    EXPECT_EQ(order[7], (Coord{0, 1, 0}));
    for (std::size_t i = 1; i < order.size(); ++i) EXPECT_EQ(manhattan(order[i - 1], order[i]), 1) << i;
    expect_covers_grid(order, Dims{4, 4, 4});
}

TEST(Sfc, HilbertIsUnitStepOnCubes) {
    for (int side : {2, 4, 8}) {
        const Dims d{side, side, side};
        const auto order = curve_order(Curve::hilbert, d);
        expect_covers_grid(order, d);
        EXPECT_EQ(order.front(), (Coord{0, 0, 0}));
        for (std::size_t i = 1; i < order.size(); ++i) ASSERT_EQ(manhattan(order[i - 1], order[i]), 1) << side << ":" << i;
    }
}

TEST(Sfc, GrayChangesOneCoordinatePerStep) {
    for (Dims d : {Dims{4, 4, 4}, Dims{8, 4, 2}, Dims{2, 2, 16}}) {
        const auto order = curve_order(Curve::gray, d);
        expect_covers_grid(order, d);
        for (std::size_t i = 1; i < order.size(); ++i) ASSERT_EQ(coords_differing(order[i - 1], order[i]), 1);
    }
}

TEST(Sfc, PeanoIsUnitStepOnPowersOfThree) {
    for (int side : {3, 9}) {
        const Dims d{side, side, side};
        const auto order = curve_order(Curve::peano, d);
        expect_covers_grid(order, d);
        for (std::size_t i = 1; i < order.size(); ++i) ASSERT_EQ(manhattan(order[i - 1], order[i]), 1) << i;
    }
}

TEST(Sfc, ClippedCurvesCoverOddShapes) {
    expect_covers_grid(curve_order(Curve::peano, Dims{4, 4, 4}), Dims{4, 4, 4});
    expect_covers_grid(curve_order(Curve::peano, Dims{5, 2, 7}), Dims{5, 2, 7});
    expect_covers_grid(curve_order(Curve::hilbert, Dims{2, 4, 8}), Dims{2, 4, 8});
    expect_covers_grid(curve_order(Curve::scan, Dims{3, 5, 2}), Dims{3, 5, 2});
}

TEST(Sfc, PowerOfTwoCurvesRejectOtherSides) {
    EXPECT_THROW(curve_order(Curve::hilbert, Dims{3, 3, 3}), InputError);
    EXPECT_THROW(curve_order(Curve::gray, Dims{4, 6, 4}), InputError);
}

TEST(Sfc, DeterministicAndIndependentOfTopologyKind) {
    for (Curve c : {Curve::peano, Curve::hilbert, Curve::gray, Curve::sweep, Curve::scan}) {
        const auto mesh = sfc_map(c, Topology::build(TopologyKind::mesh, Dims{4, 4, 4}));
        const auto torus = sfc_map(c, Topology::build(TopologyKind::torus, Dims{4, 4, 4}));
        EXPECT_TRUE(std::equal(mesh.assignment().begin(), mesh.assignment().end(), torus.assignment().begin()));
    }
}

}  // namespace
}  // namespace mapkit
