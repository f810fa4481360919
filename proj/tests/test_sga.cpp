#include "oracle.hpp"
#include "support.hpp"

#include <panorel/sga.hpp>
#include <panorel/synth.hpp>

#include <doctest.h>

#include <random>

using namespace panorel;

namespace {

ErpImage<std::uint8_t> random_image(GridSpec g, int channels, unsigned seed)
{
    ErpImage<std::uint8_t> img(g, channels);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& x : img.data()) {
        x = static_cast<std::uint8_t>(d(rng));
    }
    return img;
}

LabelImage labels_from(GridSpec g, std::initializer_list<int> values)
{
    LabelImage img(g);
    std::size_t i = 0;
    for (int x : values) {
        img.data()[i++] = static_cast<std::uint8_t>(x);
    }
    return img;
}

} // namespace

TEST_SUITE("rotate")
{
TEST_CASE("identity returns the input")
{
    const auto img = random_image(GridSpec(32, 16), 3, 1);
    CHECK(rotate_erp(img, Rotation::identity(), Sampling::bilinear) == img);
}

TEST_CASE("yaw by whole columns is a circular shift")
{
    const GridSpec g(64, 32);
    const auto img = random_image(g, 2, 2);
    for (double yaw : {90.0, 180.0, 270.0, -90.0}) {
        const int shift = ((static_cast<int>(yaw) / 90 * 16) % 64 + 64) % 64;
        for (Sampling s : {Sampling::nearest, Sampling::bilinear}) {
            const auto out = rotate_erp(img, RotationSpec{yaw, 0, 0}.rotation(), s);
            for (int v = 0; v < 32; ++v) {
                for (int u = 0; u < 64; ++u) {
                    for (int c = 0; c < 2; ++c) {
                        REQUIRE(out.at(u, v, c) == img.at((u + shift) % 64, v, c));
                    }
                }
            }
        }
    }
}

TEST_CASE("sampling map follows the inverse rotation")
{
    const GridSpec g(128, 64);
    const Rotation r = RotationSpec{30, 5, -5}.rotation();
    const SamplingMap map(g, r);
    for (int v = 0; v < 64; v += 7) {
        for (int u = 0; u < 128; u += 5) {
            const oracle::Dir d = oracle::pixel_dir(u, v, 128, 64);
            const Vec3 src = r.matrix().transpose() * Vec3(d.x, d.y, d.z);
            const double theta = std::atan2(src.x(), src.y()) / oracle::kDeg;
            const double phi = std::asin(std::clamp(src.z(), -1.0, 1.0)) / oracle::kDeg;
            const double su = (theta + 180.0) / 360.0 * 128 - 0.5;
            const double sv = (90.0 - phi) / 180.0 * 64 - 0.5;
            double du = std::abs(map.src_u(u, v) - su);
            du = std::min(du, 128 - du);
            REQUIRE(du < 1e-9);
            REQUIRE(map.src_v(u, v) == doctest::Approx(sv).epsilon(1e-9));
        }
    }
}

TEST_CASE("labels only allow nearest sampling")
{
    const LabelImage l(GridSpec(16, 8));
    CHECK(error_code([&] {
              rotate_erp(l, RotationSpec{10, 0, 0}.rotation(), Sampling::bilinear, Content::labels);
          }) == "invalid_argument");
    CHECK_NOTHROW(rotate_labels(l, RotationSpec{10, 5, 0}.rotation()));
}

TEST_CASE("labels keep their value set")
{
    const GridSpec g(128, 64);
    const SyntheticScene s = synth_scene(SceneKind::box_room, SceneDims{}, g);
    const LabelImage out = rotate_labels(s.labels, RotationSpec{33, 5, 5}.rotation());
    for (auto x : out.data()) {
        REQUIRE((x == scene_label::floor || x == scene_label::ceiling || x == scene_label::wall));
    }
}

TEST_CASE("bilinear depth never blends across invalid pixels")
{
    const GridSpec g(64, 32);
    DepthImage d(g);
    for (int v = 0; v < 32; ++v) {
        for (int u = 0; u < 64; ++u) {
            if (u % 2 == 0) {
                d.set(u, v, 4.0);
            }
        }
    }
    const DepthImage out = rotate_depth(d, RotationSpec{2.8, 0, 0}.rotation(), Sampling::bilinear);
    for (int v = 0; v < 32; ++v) {
        for (int u = 0; u < 64; ++u) {
            if (out.valid(u, v)) {
                REQUIRE(out.at(u, v) == doctest::Approx(4.0));
            }
        }
    }
}

TEST_CASE("rotating depth keeps radial distances")
{
    const GridSpec g(256, 128);
    const SyntheticScene s = synth_scene(SceneKind::box_room, SceneDims{}, g);
    const DepthImage out = rotate_depth(s.depth, RotationSpec{0, 5, 0}.rotation(), Sampling::nearest);
    const SamplingMap map(g, RotationSpec{0, 5, 0}.rotation());
    std::size_t good = 0, total = 0;
    for (int v = 10; v < 118; ++v) {
        for (int u = 0; u < 256; ++u) {
            if (!out.valid(u, v)) {
                continue;
            }
            const int su = static_cast<int>(std::floor(map.src_u(u, v) + 0.5)) % 256;
            const int sv = static_cast<int>(std::floor(map.src_v(u, v) + 0.5));
            ++total;
            good += out.at(u, v) == s.depth.at(su, std::clamp(sv, 0, 127));
        }
    }
    CHECK(good == total);
}
}

TEST_SUITE("seg_eval")
{
TEST_CASE("hand-counted confusion")
{
    const GridSpec g(4, 2);
    const LabelImage gt = labels_from(g, {0, 0, 1, 1, 2, 2, 255, 0});
    const LabelImage pr = labels_from(g, {0, 1, 1, 1, 2, 0, 0, 255});
    SegEvalOptions o;
    o.num_classes = 3;
    const SegEval e = seg_eval(pr, gt, o);
    CHECK(e.count(0, 0) == 1);
    CHECK(e.count(0, 1) == 1);
    CHECK(e.count(1, 1) == 2);
    CHECK(e.count(2, 2) == 1);
    CHECK(e.count(2, 0) == 1);
    CHECK(e.pacc == doctest::Approx(4.0 / 6.0));
    // IoU: class 0 = 1 / 3, class 1 = 2 / 3, class 2 = 1 / 2.
    CHECK(e.miou == doctest::Approx((1.0 / 3 + 2.0 / 3 + 0.5) / 3));
}

TEST_CASE("absent classes are skipped unless all are requested")
{
    const GridSpec g(2, 1);
    const LabelImage gt = labels_from(g, {0, 1});
    SegEvalOptions o;
    o.num_classes = 4;
    const SegEval e = seg_eval(gt, gt, o);
    CHECK(e.miou == 1.0);
    CHECK(std::isnan(e.per_class_iou[3]));
    o.classes = ClassSet::all;
    CHECK(seg_eval(gt, gt, o).miou == doctest::Approx(0.5));
}

TEST_CASE("errors")
{
    const GridSpec g(2, 1);
    SegEvalOptions o;
    o.num_classes = 2;
    CHECK(error_code([&] { seg_eval(labels_from(g, {0, 5}), labels_from(g, {0, 1}), o); }) ==
          "label_out_of_range");
    CHECK(error_code([&] { seg_eval(labels_from(g, {255, 255}), labels_from(g, {0, 1}), o); }) == "empty");
    CHECK(error_code([&] { seg_eval(LabelImage(GridSpec(4, 2)), labels_from(g, {0, 1}), o); }) ==
          "shape_mismatch");
}

TEST_CASE("summary statistics")
{
    const std::vector<double> x{1.0, 2.0, 4.0};
    const SummaryStats s = summarize(x);
    CHECK(s.mean == doctest::Approx(7.0 / 3));
    CHECK(s.variance == doctest::Approx((16.0 / 9 + 1.0 / 9 + 25.0 / 9) / 2));
    CHECK(s.range == 3.0);
    CHECK(error_code([] { summarize(std::vector<double>{1.0}); }) == "too_few_results");
}
}

TEST_SUITE("sga")
{
TEST_CASE("standard grid")
{
    const auto grid = standard_sga_grid();
    REQUIRE(grid.size() == 16);
    CHECK(grid[0] == RotationSpec{0, 0, 0});
    CHECK(grid[1] == RotationSpec{0, 0, 5});
    CHECK(grid[2] == RotationSpec{0, 5, 0});
    CHECK(grid[15] == RotationSpec{270, 5, 5});
}

TEST_CASE("a perfect predictor scores 100 everywhere")
{
    const GridSpec g(64, 32);
    const SyntheticScene s = synth_scene(SceneKind::box_room, SceneDims{}, g);
    const std::vector<SgaSample> samples{{std::nullopt, s.depth, s.labels}};
    std::vector<std::size_t> seen;
    const auto results = sga_run(
        samples,
        [&](const SgaView& view) {
            REQUIRE(view.depth != nullptr);
            REQUIRE(view.rgb == nullptr);
            seen.push_back(view.rotation_index);
            return view.gt;
        },
        standard_sga_grid(), {{4, 255, ClassSet::present}});
    CHECK(seen.size() == 16);
    for (const auto& r : results) {
        CHECK(r.miou == 1.0);
        CHECK(r.pacc == 1.0);
    }
    const SgaStats st = sga_stats(results);
    CHECK(st.miou.mean == 100.0);
    CHECK(st.miou.variance == 0.0);
}

TEST_CASE("an unrotated predictor degrades under yaw")
{
    const GridSpec g(64, 32);
    const SyntheticScene s = synth_scene(SceneKind::box_room, SceneDims{}, g);
    const std::vector<SgaSample> samples{{std::nullopt, std::nullopt, s.labels}};
    // Always predicts the labels of the unrotated view.
    SceneDims furnished;
    furnished.furnished = true;
    const LabelImage fixed = synth_scene(SceneKind::box_room, furnished, g).labels;
    const auto results =
        sga_run(samples, [&](const SgaView&) { return fixed; }, standard_sga_grid(), {{4, 255, ClassSet::present}});
    CHECK(results[0].pacc > results[5].pacc);
}

TEST_CASE("predictor failures name the rotation")
{
    const GridSpec g(16, 8);
    const std::vector<SgaSample> samples{{std::nullopt, std::nullopt, LabelImage(g)}};
    try {
        sga_run(
            samples,
            [](const SgaView& v) -> LabelImage {
                if (v.rotation_index == 3) {
                    throw std::runtime_error("boom");
                }
                return v.gt;
            },
            standard_sga_grid(), {{2, 255, ClassSet::present}});
        FAIL("expected an error");
    } catch (const SgaError& e) {
        CHECK(e.code() == "predictor_failed");
        CHECK(e.rotation() == RotationSpec{0, 5, 5});
    }
}
}
