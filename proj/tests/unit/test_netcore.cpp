#include "rfsic/errors.hpp"
#include "rfsic/netcore.hpp"
#include "rfsic/parallel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

using namespace rfsic;

TEST(FrequencyGrid, LinearThreePoints) {
    const auto g = make_grid(1e9, 3e9, 3, Spacing::linear);
    EXPECT_EQ(g.points(), (std::vector<double>{1e9, 2e9, 3e9}));
    EXPECT_EQ(g.spacing(), Spacing::linear);
}

TEST(FrequencyGrid, SinglePoint) {
    const auto g = make_grid(2e9, 2e9, 1, Spacing::linear);
    EXPECT_EQ(g.points(), std::vector<double>{2e9});
}

TEST(FrequencyGrid, LogMidpointIsGeometric) {
    const auto g = make_grid(1e9, 4e9, 3, Spacing::log);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0], 1e9);
    EXPECT_NEAR(g[1], 2e9, 1e-3);
    EXPECT_EQ(g[2], 4e9);
}

TEST(FrequencyGrid, EndpointsAreExact) {
    const auto g = make_grid(1e9, 3e9, 401, Spacing::linear);
    EXPECT_EQ(g.front(), 1e9);
    EXPECT_EQ(g.back(), 3e9);
    EXPECT_DOUBLE_EQ(g[200], 2e9);
}

TEST(FrequencyGrid, RejectsBadInput) {
    EXPECT_THROW(make_grid(3e9, 1e9, 3, Spacing::linear), InputError);
    EXPECT_THROW(make_grid(1e9, 3e9, 0, Spacing::linear), InputError);
    EXPECT_THROW(make_grid(1e9, 2e9, 1, Spacing::linear), InputError);
    EXPECT_THROW(make_grid(0.0, 1e9, 3, Spacing::log), InputError);
    EXPECT_THROW(make_grid(-1e9, 1e9, 3, Spacing::linear), InputError);
    EXPECT_THROW(FrequencyGrid({1e9, 1e9}, Spacing::custom), InputError);
    EXPECT_THROW(FrequencyGrid({}, Spacing::custom), InputError);
}

TEST(FrequencyGrid, DetectsSpacingOfPointList) {
    EXPECT_EQ(grid_from_points({1e9, 2e9, 3e9}).spacing(), Spacing::linear);
    EXPECT_EQ(grid_from_points({1e9, 1.5e9, 3e9}).spacing(), Spacing::custom);
}

TEST(Decibels, Examples) {
    EXPECT_EQ(db_from_mag(1.0), 0.0);
    EXPECT_NEAR(db_from_mag(0.7071), -3.01, 0.01);
    EXPECT_NEAR(db_from_mag(0.1), -20.0, 1e-12);
    EXPECT_NEAR(mag_from_db(-20.0), 0.1, 1e-15);
    EXPECT_NEAR(loss_db(0.1), 20.0, 1e-12);
}

TEST(Decibels, ZeroAndNegative) {
    EXPECT_EQ(db_from_mag(0.0), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(loss_db(0.0), std::numeric_limits<double>::infinity());
    EXPECT_THROW(db_from_mag(-0.5), InputError);
}

TEST(Decibels, RoundTrip) {
    for (double m : {1e-9, 1e-3, 0.25, 0.7071, 1.0, 3.5})
        EXPECT_NEAR(mag_from_db(db_from_mag(m)) / m, 1.0, 1e-13);
}

TEST(Passivity, SingularValueChecks) {
    CMatrix id = CMatrix::Identity(3, 3);
    EXPECT_NEAR(max_singular_value(id), 1.0, 1e-15);
    EXPECT_TRUE(is_passive(id));
    EXPECT_FALSE(is_passive(id * 1.01));
    CMatrix a(2, 2);
    a << 0.0, 0.5, 0.5, 0.0;
    EXPECT_TRUE(is_reciprocal(a, 1e-15));
    a(0, 1) = 0.4;
    EXPECT_FALSE(is_reciprocal(a, 1e-3));
}

TEST(NetworkBlock, ValidatesShapeAndGrid) {
    const auto g = make_grid(1e9, 2e9, 2, Spacing::linear);
    EXPECT_THROW(NetworkBlock("b", g, {CMatrix::Zero(2, 2)}), InputError);
    EXPECT_THROW(NetworkBlock("b", g, {CMatrix::Zero(2, 2), CMatrix::Zero(3, 3)}), InputError);
    EXPECT_THROW(NetworkBlock("b", g, {CMatrix::Zero(2, 3), CMatrix::Zero(2, 3)}), InputError);
    EXPECT_THROW(NetworkBlock("", g, {CMatrix::Zero(1, 1), CMatrix::Zero(1, 1)}), InputError);
    CMatrix bad = CMatrix::Zero(1, 1);
    bad(0, 0) = Complex(std::nan(""), 0.0);
    EXPECT_THROW(NetworkBlock("b", g, {bad, bad}), InputError);
    const NetworkBlock ok("b", g, {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2)});
    EXPECT_EQ(ok.n_ports(), 2);
    EXPECT_EQ(ok.z_ref(), 50.0);
}

TEST(NetworkBlock, RenamedKeepsData) {
    const auto g = make_grid(1e9, 1e9, 1, Spacing::linear);
    CMatrix m(1, 1);
    m << Complex(0.3, -0.1);
    const auto b = NetworkBlock::constant("a", g, m).renamed("z");
    EXPECT_EQ(b.name(), "z");
    EXPECT_EQ(b.s(0, 1, 1), Complex(0.3, -0.1));
}

namespace {

NetworkBlock two_point_block() {
    const auto g = make_grid(1e9, 3e9, 2, Spacing::linear);
    CMatrix a = CMatrix::Zero(1, 1), b = CMatrix::Ones(1, 1);
    return NetworkBlock("b", g, {a, b});
}

}  // namespace

TEST(Interpolation, LinearMidpoint) {
    const auto r = interpolate_block(two_point_block(), make_grid(2e9, 2e9, 1, Spacing::linear));
    EXPECT_NEAR(std::abs(r.s(0, 1, 1) - Complex(0.5, 0.0)), 0.0, 1e-15);
}

TEST(Interpolation, ExistingPointIsBitwiseEqual) {
    const auto g = make_grid(1e9, 3e9, 7, Spacing::linear);
    std::vector<CMatrix> ms;
    for (std::size_t k = 0; k < g.size(); ++k) {
        CMatrix m(1, 1);
        m << Complex(std::sin(0.37 * static_cast<double>(k) + 0.1), std::cos(1.3 * static_cast<double>(k)) / 3.0);
        ms.push_back(m);
    }
    const NetworkBlock b("b", g, ms);
    const auto r = interpolate_block(b, grid_from_points({g[2], g[5]}));
    const Complex x = r.s(0, 1, 1), y = b.s(2, 1, 1);
    EXPECT_EQ(std::memcmp(&x, &y, sizeof x), 0);
    EXPECT_EQ(r.s(1, 1, 1), b.s(5, 1, 1));
}

TEST(Interpolation, RefusesToExtrapolate) {
    EXPECT_THROW(interpolate_block(two_point_block(), make_grid(4e9, 4e9, 1, Spacing::linear)), InputError);
    EXPECT_THROW(interpolate_block(two_point_block(), make_grid(0.5e9, 2e9, 2, Spacing::linear)), InputError);
}

TEST(PortRef, Formatting) {
    EXPECT_EQ(to_string(PortRef{"S1", 3}), "S1.3");
}

TEST(Parallel, CoversEveryIndexOnce) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits)
        EXPECT_EQ(h, 1);
}

TEST(Parallel, RethrowsLowestFailingIndex) {
    try {
        parallel_for(100, [](std::size_t i) {
            if (i == 17 || i == 63)
                throw InputError("index " + std::to_string(i));
        });
        FAIL() << "expected an exception";
    } catch (const InputError& e) {
        EXPECT_STREQ(e.what(), "index 17");
    }
}
