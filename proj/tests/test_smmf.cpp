#include "support.hpp"

#include <panorel/smmf.hpp>

#include <doctest.h>

#include <random>

using namespace panorel;

TEST_SUITE("smmf")
{
TEST_CASE("default layout on a 4096 x 2048 canvas")
{
    const RegionGrid g = slice_regions(GridSpec(4096, 2048), 3, 7, 1080, 720);
    REQUIRE(g.regions.size() == 21);
    CHECK(g.at(0, 0).v_start == 0);
    CHECK(g.at(1, 0).v_start == 484);
    CHECK(g.at(2, 0).v_start == 968);
    for (int c = 0; c < 7; ++c) {
        CHECK(g.at(1, c).u_start == (720 * c) % 4096);
    }
    // Column 5 starts at 3600 and runs 1080 px, past the right edge.
    CHECK(g.at(0, 5).u_start + 1080 > 4096);
}

TEST_CASE("rows are symmetric about the equator")
{
    for (int m : {1, 2, 3, 4, 5}) {
        const RegionGrid g = slice_regions(800, 400, m, 2, 120, 90);
        for (int r = 0; r < m; ++r) {
            const int top = g.at(r, 0).v_start;
            const int mirrored = g.at(m - 1 - r, 0).v_start;
            CHECK(top + mirrored == 400 - 120);
            CHECK(top >= 0);
            CHECK(top + 120 <= 400);
        }
    }
}

TEST_CASE("column offset and bad arguments")
{
    const RegionGrid g = slice_regions(100, 50, 1, 3, 40, 30, 80);
    CHECK(g.at(0, 0).u_start == 80);
    CHECK(g.at(0, 1).u_start == 10);
    CHECK(g.at(0, 2).u_start == 40);
    CHECK(error_code([] { slice_regions(100, 50, 1, 1, 60, 30); }) == "invalid_argument");
    CHECK(error_code([] { slice_regions(100, 50, 1, 1, 40, 0); }) == "invalid_argument");
    CHECK(error_code([] { slice_regions(100, 50, 0, 1, 40, 10); }) == "invalid_argument");
}

TEST_CASE("extract then recombine")
{
    FeatureMap canvas(20, 10, 2);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> d(-1, 1);
    for (auto& x : canvas.data()) {
        x = d(rng);
    }
    const RegionGrid g = slice_regions(20, 10, 2, 3, 6, 8);
    std::vector<RegionOutput> outs;
    for (const auto& r : g.regions) {
        outs.push_back({r, extract_region(canvas, r)});
    }
    const Recombined rec = recombine(g, outs, true);
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 20; ++x) {
            if (rec.coverage.at(x, y) > 0) {
                REQUIRE(rec.sum.at(x, y, 1) == doctest::Approx(canvas.at(x, y, 1)));
            } else {
                REQUIRE(rec.sum.at(x, y, 1) == 0.0);
            }
        }
    }
    // Wrapping region: column 2 starts at 16 and covers 16..19, 0..1.
    const FeatureMap w = extract_region(canvas, g.at(0, 2));
    CHECK(w.at(4, 0) == canvas.at(0, g.at(0, 2).v_start));
}

TEST_CASE("recombine validates its inputs")
{
    const RegionGrid g = slice_regions(20, 10, 1, 2, 6, 8);
    const std::vector<RegionOutput> wrong{{g.regions[0], FeatureMap(5, 5, 1)}};
    CHECK(error_code([&] { recombine(g, wrong); }) == "shape_mismatch");
    const std::vector<RegionOutput> foreign{{Region{0, 0, 3, 0, 6}, FeatureMap(6, 6, 1)}};
    CHECK(error_code([&] { recombine(g, foreign); }) == "shape_mismatch");
}

TEST_CASE("soft gate")
{
    const std::vector<double> z{1.0, 2.0, 3.0};
    const ProbVector p = gate_soft(z, 1.0);
    const double e = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
    CHECK(p[2] == doctest::Approx(std::exp(3.0) / e));
    const ProbVector sharp = gate_soft(z, 0.01);
    CHECK(sharp[2] == doctest::Approx(1.0));
    CHECK(error_code([&] { gate_soft(z, 0.0); }) == "invalid_argument");
    const std::vector<double> bad{1.0, NAN};
    CHECK(error_code([&] { gate_soft(bad, 1.0); }) == "invalid_argument");
}

TEST_CASE("gumbel gate is reproducible for a seed")
{
    const std::vector<double> z{0.3, 0.1, -0.2};
    std::mt19937_64 a(11), b(11);
    const ProbVector pa = gate_soft_gumbel(z, 0.5, a);
    const ProbVector pb = gate_soft_gumbel(z, 0.5, b);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(pa[i] == pb[i]);
    }
}

TEST_CASE("hard gate ties go to the lower index")
{
    const std::vector<double> z{1.0, 3.0, 3.0};
    const ProbVector p = gate_hard(z);
    CHECK(p.is_one_hot());
    CHECK(p[1] == 1.0);
}

TEST_CASE("temperature schedule")
{
    CHECK(temperature_schedule(0, 10) == 1.0);
    CHECK(temperature_schedule(9, 10) == doctest::Approx(0.1));
    CHECK(temperature_schedule(3, 7) == doctest::Approx(std::pow(0.1, 0.5)));
    CHECK(temperature_schedule(0, 1) == 1.0);
    CHECK(error_code([] { temperature_schedule(10, 10); }) == "out_of_range");
}

TEST_CASE("early stop")
{
    const std::vector<std::uint8_t> raw{1, 0, 1, 1};
    const GatePattern p = apply_early_stop(raw);
    CHECK(std::vector<std::uint8_t>(p.decisions().begin(), p.decisions().end()) ==
          std::vector<std::uint8_t>{1, 0, 0, 0});
    CHECK(p.fused_cells() == 1);
    CHECK(error_code([] { GatePattern({0, 1}); }) == "invalid_pattern");
    CHECK(error_code([] { GatePattern({2}); }) == "invalid_pattern");
}

TEST_CASE("fuse cell weights the operations")
{
    const FeatureMap rgb(2, 2, 1, 1.0), depth(2, 2, 1, 3.0);
    int calls = 0;
    const std::vector<FusionOp> ops{
        [&](const FeatureMap& a, const FeatureMap&) {
            ++calls;
            return a;
        },
        [&](const FeatureMap& a, const FeatureMap& b) {
            ++calls;
            FeatureMap o = a;
            for (std::size_t i = 0; i < o.data().size(); ++i) {
                o.data()[i] += b.data()[i];
            }
            return o;
        }};
    const FeatureMap mix = fuse_cell(rgb, depth, ProbVector({0.25, 0.75}), ops);
    CHECK(mix.at(1, 1) == doctest::Approx(0.25 * 1 + 0.75 * 4));
    calls = 0;
    const FeatureMap only = fuse_cell(rgb, depth, ProbVector({0.0, 1.0}), ops);
    CHECK(calls == 1);
    CHECK(only.at(0, 0) == 4.0);
    CHECK(error_code([&] { fuse_cell(rgb, depth, ProbVector({1.0}), ops); }) == "shape_mismatch");
}

TEST_CASE("usage report")
{
    const std::vector<GateRecord> recs{{0, 0, {1, 1, 0, 0}}, {0, 0, {0, 0, 0, 0}}, {1, 2, {1, 1, 1, 1}}};
    const GateUsageTable t = gate_usage_report(recs);
    CHECK(t.cells == 4);
    CHECK(t.percent.at({0, 0}) == std::vector<double>{50, 0, 50, 0, 0});
    CHECK(t.percent.at({1, 2}) == std::vector<double>{0, 0, 0, 0, 100});
    CHECK(t.totals.at({0, 0}) == 2);
    const std::vector<GateRecord> bad{{0, 0, {0, 1}}};
    CHECK(error_code([&] { gate_usage_report(bad); }) == "invalid_pattern");
}

TEST_CASE("probability vectors are checked")
{
    CHECK(error_code([] { ProbVector({0.5, 0.4}); }) == "invalid_argument");
    CHECK(error_code([] { ProbVector({1.5, -0.5}); }) == "invalid_argument");
    CHECK_FALSE(ProbVector({0.5, 0.5}).is_one_hot());
}
}
