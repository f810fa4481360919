#include "oracle.hpp"
#include "support.hpp"

#include <panorel/rel.hpp>
#include <panorel/sga.hpp>
#include <panorel/synth.hpp>

#include <doctest.h>

#include <array>
#include <random>

using namespace panorel;

TEST_SUITE("rel")
{
TEST_CASE("quantization rounds half away from zero and clamps")
{
    CHECK(quantize(0.5) == 1);
    CHECK(quantize(0.49) == 0);
    CHECK(quantize(254.5) == 255);
    CHECK(quantize(-3.0) == 0);
    CHECK(quantize(300.0) == 255);
    CHECK(quantize(127.5) == 128);
    CHECK(quantize(127.5 - 1e-12) == 128);
    CHECK(quantize(127.4999) == 127);
}

TEST_CASE("normalization")
{
    CHECK(normalize_value(90.0, NormKind::angle) == doctest::Approx(127.5));
    CHECK(normalize_value(180.0, NormKind::angle) == 255.0);
    CHECK(normalize_value(3.0, NormKind::linear, {2.0, 6.0}) == doctest::Approx(63.75));
    CHECK(normalize_value(3.0, NormKind::linear, {3.0, 3.0}) == 0.0);

    const std::vector<double> vals{5.0, 1.0, 3.0, 100.0};
    const std::vector<std::uint8_t> mask{1, 1, 1, 0};
    const auto out = normalize_channel(vals, mask, NormKind::linear);
    CHECK(out == std::vector<std::uint8_t>{255, 0, 128, 0});
    CHECK(error_code([&] { linear_range(vals, std::vector<std::uint8_t>(4, 0)); }) == "empty");
}

TEST_CASE("rectified depth is the planar distance")
{
    CHECK(rectified_depth(5.0, 90.0) == 0.0);
    CHECK(rectified_depth(5.0, 0.0) == 5.0);
    CHECK(rectified_depth(2.0, 60.0) == doctest::Approx(1.0));
}

TEST_CASE("vertical and lateral angles")
{
    CHECK(vertical_angle(UnitVec3(0, 0, 1)) == doctest::Approx(0.0));
    CHECK(vertical_angle(UnitVec3(1, 0, 0)) == doctest::Approx(90.0));
    CHECK(vertical_angle(UnitVec3(0, 0, -1)) == doctest::Approx(180.0));
    CHECK(lateral_angle(UnitVec3(0, 0, 1), 33.0) == doctest::Approx(90.0));
    CHECK(lateral_angle(UnitVec3(1, 0, 0), 0.0) == doctest::Approx(0.0));
    CHECK(lateral_angle(UnitVec3(0, 1, 0), 90.0) == doctest::Approx(0.0));
    CHECK(lateral_angle(UnitVec3(-1, 0, 0), 0.0) == doctest::Approx(180.0));
    CHECK(loa(UnitVec3(0, 0, 1), 10.0) == doctest::Approx(127.5));
}

TEST_CASE("height blend applies only near horizontal surfaces")
{
    const EgviaParams p;
    CHECK(egvia(10.0, 14.0, 200.0, p) == doctest::Approx(107.0));
    CHECK(egvia(170.0, 240.0, 100.0, p) == doctest::Approx(170.0));
    CHECK(egvia(90.0, 127.5, 200.0, p) == doctest::Approx(127.5));
    CHECK(egvia(45.0, 63.75, 200.0, p) == doctest::Approx(63.75));
    EgviaParams bad;
    bad.lambda = 1.5;
    CHECK(error_code([&] { bad.validate(); }) == "invalid_argument");
    bad = {};
    bad.alpha_deg = 90.0;
    CHECK(error_code([&] { bad.validate(); }) == "invalid_argument");
}

TEST_CASE("floor height")
{
    PointCloud c(GridSpec(8, 4));
    c.set(0, 0, Vec3(0, 0, 1.0));
    c.set(1, 3, Vec3(0, 0, -2.0));
    CHECK(floor_height(c) == -2.0);
    CHECK(height(0.5, c) == 2.5);
    CHECK(error_code([] { floor_height(PointCloud(GridSpec(8, 4))); }) == "empty");
}

TEST_CASE("all-invalid depth encodes to an all-invalid image")
{
    const DepthImage d(GridSpec(32, 16));
    const RelImage rel = encode_rel(d);
    CHECK(std::all_of(rel.mask().data().begin(), rel.mask().data().end(), [](auto m) { return m == 0; }));
    const HhaImage hha = encode_hha(d);
    CHECK(std::all_of(hha.channels().data().begin(), hha.channels().data().end(), [](auto m) { return m == 0; }));
}

TEST_CASE("floor plane channels")
{
    const GridSpec g(256, 128);
    const SyntheticScene s = synth_scene(SceneKind::floor_plane, SceneDims{}, g);
    const RelImage rel = encode_rel(s.depth);
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            if (!rel.valid(u, v)) {
                continue;
            }
            // Level floor: angle 0, height 0, lateral 90 degrees.
            REQUIRE(rel.at(u, v, RelImage::kEgvia) == 0);
            REQUIRE(rel.at(u, v, RelImage::kLoa) == 128);
        }
    }
}

TEST_CASE("encoding is equivariant to a half-turn yaw")
{
    const GridSpec g(512, 256);
    SceneDims dims;
    dims.furnished = true;
    const SyntheticScene s = synth_scene(SceneKind::box_room, dims, g);
    for (double yaw : {90.0, 180.0}) {
        CAPTURE(yaw);
        const DepthImage turned = rotate_depth(s.depth, RotationSpec{yaw, 0, 0}.rotation(), Sampling::nearest);
        const RelImage a = encode_rel(s.depth);
        const RelImage b = encode_rel(turned);
        const int shift = static_cast<int>(yaw / 360.0 * g.width());
        // Channels checked: depth and EGVIA always; LOA only for a half turn.
        const std::vector<int> channels = yaw == 180.0 ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1};
        for (int c : channels) {
            CAPTURE(c);
            std::size_t total = 0, exact = 0, worst = 0;
            for (int v = 0; v < g.height(); ++v) {
                for (int u = 0; u < g.width(); ++u) {
                    const int su = (u + shift) % g.width();
                    REQUIRE(a.valid(su, v) == b.valid(u, v));
                    if (!b.valid(u, v)) {
                        continue;
                    }
                    const int diff = std::abs(int(a.at(su, v, c)) - int(b.at(u, v, c)));
                    ++total;
                    exact += diff == 0;
                    worst = std::max<std::size_t>(worst, diff);
                }
            }
            CHECK(worst <= 1);
            CHECK(static_cast<double>(exact) / static_cast<double>(total) >= 0.999);
        }
    }
}

TEST_CASE("lateral angle depends on the azimuth origin")
{
    // A wall facing the camera along +x at theta = 90 reads 180 degrees; after a
    // quarter turn the same wall sits at theta = 0 with normal -y and reads 90.
    CHECK(lateral_angle(UnitVec3(-1, 0, 0), 90.0) == doctest::Approx(90.0));
    CHECK(lateral_angle(UnitVec3(0, -1, 0), 0.0) == doctest::Approx(90.0));
    CHECK(lateral_angle(UnitVec3(-1, 0, 0), 0.0) == doctest::Approx(180.0));
}

TEST_CASE("hha channels")
{
    const GridSpec g(256, 128);
    const SyntheticScene s = synth_scene(SceneKind::box_room, SceneDims{}, g);
    const HhaImage hha = encode_hha(s.depth);
    std::size_t floor_px = 0, floor_ok = 0, ceil_px = 0, ceil_ok = 0;
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            if (!hha.valid(u, v)) {
                continue;
            }
            if (s.labels.at(u, v) == scene_label::floor) {
                ++floor_px;
                floor_ok += hha.at(u, v, HhaImage::kAngle) <= 1 && hha.at(u, v, HhaImage::kHeight) <= 1;
            }
            if (s.labels.at(u, v) == scene_label::ceiling) {
                ++ceil_px;
                ceil_ok += hha.at(u, v, HhaImage::kAngle) >= 254 && hha.at(u, v, HhaImage::kHeight) >= 254;
            }
        }
    }
    CHECK(floor_px > 1000);
    CHECK(static_cast<double>(floor_ok) / floor_px > 0.98);
    CHECK(static_cast<double>(ceil_ok) / ceil_px > 0.98);
}

TEST_CASE("hha matches the analytic reference")
{
    const GridSpec g(512, 256);
    const SyntheticScene s = synth_scene(SceneKind::box_room, SceneDims{}, g);
    const HhaImage hha = encode_hha(s.depth);
    std::vector<double> inv, hgt, ang;
    std::vector<std::array<int, 2>> px;
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            if (!hha.valid(u, v)) {
                continue;
            }
            const oracle::Dir d = oracle::pixel_dir(u, v, g.width(), g.height());
            const auto hit = oracle::box_room(d);
            REQUIRE(hit.has_value());
            inv.push_back(1.0 / hit->t);
            hgt.push_back(hit->t * d.z);
            ang.push_back(oracle::acos_deg(hit->nz));
            px.push_back({u, v});
        }
    }
    const auto [imin, imax] = std::minmax_element(inv.begin(), inv.end());
    const auto [hmin, hmax] = std::minmax_element(hgt.begin(), hgt.end());
    std::size_t within = 0;
    for (std::size_t i = 0; i < px.size(); ++i) {
        const int expect[3] = {oracle::round_u8((inv[i] - *imin) / (*imax - *imin) * 255.0),
                               oracle::round_u8((hgt[i] - *hmin) / (*hmax - *hmin) * 255.0),
                               oracle::round_u8(ang[i] / 180.0 * 255.0)};
        bool ok = true;
        for (int c = 0; c < 3; ++c) {
            ok = ok && std::abs(int(hha.at(px[i][0], px[i][1], c)) - expect[c]) <= 1;
        }
        within += ok;
    }
    CHECK(static_cast<double>(within) / static_cast<double>(px.size()) >= 0.99);
}

TEST_CASE("constant depth gives a zero disparity channel")
{
    const GridSpec g(128, 64);
    const std::vector<double> meters(g.pixel_count(), 2.5);
    const HhaImage hha = encode_hha(DepthImage::from_meters(g, meters));
    std::size_t valid = 0;
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            if (hha.valid(u, v)) {
                ++valid;
                REQUIRE(hha.at(u, v, HhaImage::kDisparity) == 0);
            }
        }
    }
    CHECK(valid > 0);
}

TEST_CASE("blend stays between its inputs")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> angle(0.0, 180.0), byte(0.0, 255.0), lam(0.0, 1.0), alpha(1.0, 89.0);
    for (int i = 0; i < 10000; ++i) {
        EgviaParams p;
        p.lambda = lam(rng);
        p.alpha_deg = alpha(rng);
        const double a = angle(rng);
        const double a_hat = normalize_value(a, NormKind::angle);
        const double h_hat = byte(rng);
        const double e = egvia(a, a_hat, h_hat, p);
        REQUIRE(e >= std::min(a_hat, h_hat) - 1e-12);
        REQUIRE(e <= std::max(a_hat, h_hat) + 1e-12);
        if (a >= p.alpha_deg && a <= 180.0 - p.alpha_deg) {
            REQUIRE(e == a_hat);
        }
    }
}

TEST_CASE("rel and hha share their intermediates")
{
    const GridSpec g(256, 128);
    SceneDims dims;
    dims.furnished = true;
    const SyntheticScene s = synth_scene(SceneKind::box_room, dims, g);
    const CorrectedGeometry geo = prepare_geometry(s.depth, {});
    const GeometryChannels ch = compute_geometry(geo.cloud, geo.normals);
    const RelImage rel = encode_rel(ch);
    const HhaImage hha = encode_hha(ch);
    CHECK(rel.mask() == hha.mask());
    CHECK(rel == encode_rel(s.depth));
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            const std::size_t i = static_cast<std::size_t>(v) * g.width() + u;
            if (!rel.valid(u, v)) {
                continue;
            }
            // Off the blended branch EGVIA is exactly the angle code.
            if (ch.vertical_angle[i] >= 45.0 && ch.vertical_angle[i] <= 135.0) {
                REQUIRE(rel.at(u, v, RelImage::kEgvia) == hha.at(u, v, HhaImage::kAngle));
            }
        }
    }
}

TEST_CASE("profile correlation")
{
    const GridSpec g(64, 32);
    ErpImage<std::uint8_t> h(g), a(g), inv(g);
    Mask m(g, 1, 1);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dist(0, 255);
    for (int v = 0; v < g.height(); ++v) {
        for (int u = 0; u < g.width(); ++u) {
            const auto x = static_cast<std::uint8_t>(dist(rng));
            h.at(u, v) = x;
            a.at(u, v) = x;
            inv.at(u, v) = static_cast<std::uint8_t>(255 - x);
        }
    }
    CHECK(ha_profile(h, a, m).correlation == 1.0);
    CHECK(ha_profile(h, inv, m).correlation == -1.0);
    const HaProfile p = ha_profile(h, ErpImage<std::uint8_t>(g, 1, 9), m);
    CHECK(std::isnan(p.correlation));
    CHECK(p.phi_deg.size() == 32);
    CHECK(p.phi_deg.front() == doctest::Approx(90.0 - 180.0 / 64.0));
}

TEST_CASE("profile skips masked rows")
{
    const GridSpec g(16, 8);
    ErpImage<std::uint8_t> h(g, 1, 10);
    Mask m(g, 1, 0);
    for (int u = 0; u < 16; ++u) {
        m.at(u, 3) = 1;
        m.at(u, 5) = 1;
    }
    h.at(0, 3) = 26;
    const HaProfile p = ha_profile(h, h, m);
    REQUIRE(p.phi_deg.size() == 2);
    CHECK(p.height_mean[0] == doctest::Approx(11.0));
    CHECK(p.height_mean[1] == doctest::Approx(10.0));
}
}
