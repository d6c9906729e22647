#include "rfsic/errors.hpp"
#include "rfsic/touchstone.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace rfsic;

TEST(TouchstoneRead, RealImaginaryInHz) {
    const auto b = parse_touchstone("# HZ S RI R 50\n1e9 0.25 -0.5\n", 1);
    ASSERT_EQ(b.grid().size(), 1u);
    EXPECT_EQ(b.grid()[0], 1e9);
    EXPECT_EQ(b.s(0, 1, 1), Complex(0.25, -0.5));
}

TEST(TouchstoneRead, MagnitudeAngle) {
    const auto b = parse_touchstone("# GHZ S MA R 50\n1.0 0.5 90.0\n", 1);
    EXPECT_EQ(b.grid()[0], 1e9);
    EXPECT_NEAR(b.s(0, 1, 1).real(), 0.0, 1e-12);
    EXPECT_NEAR(b.s(0, 1, 1).imag(), 0.5, 1e-12);
}

TEST(TouchstoneRead, DecibelAngle) {
    const auto b = parse_touchstone("# GHZ S DB R 50\n1.0 -6.0206 180\n", 1);
    EXPECT_NEAR(b.s(0, 1, 1).real(), -0.5, 1e-4);
    EXPECT_NEAR(b.s(0, 1, 1).imag(), 0.0, 1e-4);
}

TEST(TouchstoneRead, DefaultsAndCaseInsensitiveOptions) {
    // No option line: GHz, MA, 50 ohm.
    auto f = read_touchstone("! comment only\n2 0.5 0\n", 1);
    EXPECT_EQ(f.block.grid()[0], 2e9);
    EXPECT_EQ(f.options.format, DataFormat::ma);
    f = read_touchstone("# mhz s ri r 50\n100 0.1 0.2 ! trailing\n", 1);
    EXPECT_EQ(f.block.grid()[0], 1e8);
    EXPECT_EQ(f.options.freq_unit, FreqUnit::mhz);
}

TEST(TouchstoneRead, TwoPortColumnOrder) {
    // v1 2-port order is S11 S21 S12 S22.
    const auto b = parse_touchstone("# GHZ S RI R 50\n1 0.1 0 0.2 0 0.3 0 0.4 0\n", 2);
    EXPECT_EQ(b.s(0, 1, 1).real(), 0.1);
    EXPECT_EQ(b.s(0, 2, 1).real(), 0.2);
    EXPECT_EQ(b.s(0, 1, 2).real(), 0.3);
    EXPECT_EQ(b.s(0, 2, 2).real(), 0.4);
}

TEST(TouchstoneRead, ThreePortSpansLines) {
    const std::string text =
        "# GHZ S RI R 50\n"
        "1 0.11 0 0.12 0 0.13 0\n"
        "  0.21 0 0.22 0 0.23 0\n"
        "  0.31 0 0.32 0 0.33 0\n";
    const auto b = parse_touchstone(text, 3);
    EXPECT_EQ(b.s(0, 1, 2).real(), 0.12);
    EXPECT_EQ(b.s(0, 3, 1).real(), 0.31);
}

TEST(TouchstoneRead, NoiseBlockIsSkippedWithWarning) {
    const std::string text =
        "# GHZ S RI R 50\n"
        "1 0.1 0 0.2 0 0.3 0 0.4 0\n"
        "2 0.1 0 0.2 0 0.3 0 0.4 0\n"
        "1 1.5 0.3 20 0.2\n"
        "2 1.7 0.3 25 0.2\n";
    const auto f = read_touchstone(text, 2);
    EXPECT_EQ(f.block.grid().size(), 2u);
    EXPECT_FALSE(f.warnings.empty());
}

TEST(TouchstoneRead, Errors) {
    EXPECT_THROW(parse_touchstone("# GHZ Y RI R 50\n1 0 0\n", 1), InputError);
    EXPECT_THROW(parse_touchstone("# GHZ S XX R 50\n1 0 0\n", 1), InputError);
    EXPECT_THROW(parse_touchstone("# GHZ S RI R 50\n1 0 0\n1 0 0\n", 1), ParseError);
    EXPECT_THROW(parse_touchstone("# GHZ S RI R 50\n1 0 0 0\n", 1), ParseError);
    EXPECT_THROW(parse_touchstone("# GHZ S RI R 50\n1 0 abc\n", 1), ParseError);
    EXPECT_THROW(parse_touchstone("# GHZ S RI R 50\n", 1), InputError);
    EXPECT_THROW(parse_touchstone("# GHZ S RI R 50\n1 0 0 0 0 0 0\n", 2), ParseError);
}

TEST(TouchstoneRead, KeepsNonStandardReference) {
    // Other impedances parse; the solver refuses them at assembly.
    const auto f = read_touchstone("# GHZ S RI R 75\n1 0 0\n", 1);
    EXPECT_EQ(f.options.z_ref, 75.0);
    EXPECT_EQ(f.block.z_ref(), 75.0);
}

TEST(TouchstoneRead, ErrorMessagesCarryLineNumbers) {
    try {
        parse_touchstone("# GHZ S RI R 50\n1 0 0\n! fine\n2 0 zz\n", 1);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(TouchstoneRead, VersionTwoIsRejected) {
    try {
        parse_touchstone("[Version] 2.0\n# GHZ S RI R 50\n[Number of Ports] 1\n", 1);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("Touchstone v2 unsupported"), std::string::npos);
    }
    EXPECT_THROW(ports_from_extension("antenna.ts"), InputError);
}

TEST(TouchstoneWrite, ZeroOnePortRealImag) {
    const auto g = make_grid(1e9, 1e9, 1, Spacing::linear);
    const auto b = NetworkBlock::constant("zero", g, CMatrix::Zero(1, 1));
    const std::string text = write_touchstone(b, DataFormat::ri);
    EXPECT_NE(text.find("# GHZ S RI R 50\n1.0 0.0 0.0\n"), std::string::npos) << text;
}

TEST(TouchstoneWrite, MagnitudeAngleOfMinusOne) {
    const auto g = make_grid(1e9, 1e9, 1, Spacing::linear);
    CMatrix m(1, 1);
    m << -1.0;
    const std::string text = write_touchstone(NetworkBlock::constant("short", g, m), DataFormat::ma);
    EXPECT_NE(text.find("\n1.0 1.0 180.0\n"), std::string::npos) << text;
}

TEST(TouchstoneWrite, ExtensionGivesPortCount) {
    EXPECT_EQ(ports_from_extension("a.s1p"), 1);
    EXPECT_EQ(ports_from_extension("dir/b.S4P"), 4);
    EXPECT_THROW(ports_from_extension("a.s5p"), InputError);
    EXPECT_THROW(ports_from_extension("a.txt"), InputError);
}

class TouchstoneRoundTrip : public ::testing::TestWithParam<std::tuple<int, DataFormat>> {};

TEST_P(TouchstoneRoundTrip, RandomBlock) {
    const auto [n, fmt] = GetParam();
    std::mt19937_64 rng(1000 + static_cast<unsigned>(n) * 7 + static_cast<unsigned>(fmt));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto g = make_grid(0.5e9, 6e9, 23, Spacing::linear);
    std::vector<CMatrix> ms;
    for (std::size_t k = 0; k < g.size(); ++k) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = Complex(u(rng), u(rng));
        ms.push_back(m);
    }
    const NetworkBlock b("rt", g, ms);
    const auto back = parse_touchstone(write_touchstone(b, fmt), n);
    ASSERT_EQ(back.grid().size(), g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_NEAR(back.grid()[k] / g[k], 1.0, 1e-15);
        EXPECT_LE((back.at(k) - b.at(k)).cwiseAbs().maxCoeff(), 1e-9);
    }
}

INSTANTIATE_TEST_SUITE_P(AllFormatsAndPorts, TouchstoneRoundTrip,
                         ::testing::Combine(::testing::Values(1, 2, 3, 4),
                                            ::testing::Values(DataFormat::ri, DataFormat::ma, DataFormat::db)));

TEST(TouchstoneFile, LoadFromDisk) {
    const auto dir = std::filesystem::temp_directory_path() / "rfsic_ts_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "one.s1p").string();
    {
        std::ofstream(path) << "# GHZ S RI R 50\n1 0.1 0.2\n2 0.3 0.4\n";
    }
    const auto b = load_touchstone_file(path);
    EXPECT_EQ(b.n_ports(), 1);
    EXPECT_EQ(b.s(1, 1, 1), Complex(0.3, 0.4));
    EXPECT_THROW(load_touchstone_file((dir / "missing.s1p").string()), InputError);
    std::filesystem::remove_all(dir);
}
