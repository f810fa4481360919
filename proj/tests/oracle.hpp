// Independent scalar reference implementations used by the tests. Nothing here
// calls into the library; formulas are written out directly in radians.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Dir {
    double theta; // degrees
    double phi;   // degrees
    double x, y, z;
};

inline Dir pixel_dir(int u, int v, int width, int height)
{
    Dir d{};
    d.theta = (u + 0.5) / width * 360.0 - 180.0;
    d.phi = 90.0 - (v + 0.5) / height * 180.0;
    const double t = d.theta * kDeg;
    const double p = d.phi * kDeg;
    d.x = std::sin(t) * std::cos(p);
    d.y = std::cos(t) * std::cos(p);
    d.z = std::sin(p);
    return d;
}

struct Hit {
    double t;
    double nx, ny, nz; // unit normal facing the camera
};

// Axis-aligned room: |x| <= sx/2, |y| <= sy/2, floor at -cam_h, ceiling at sz - cam_h.
inline std::optional<Hit> box_room(const Dir& d, double sx = 4.0, double sy = 6.0, double sz = 3.0,
                                   double cam_h = 1.6)
{
    Hit best{std::numeric_limits<double>::infinity(), 0, 0, 0};
    auto consider = [&](double t, double nx, double ny, double nz) {
        if (t > 0 && t < best.t) {
            best = {t, nx, ny, nz};
        }
    };
    if (d.x > 0) consider(sx / 2 / d.x, -1, 0, 0);
    if (d.x < 0) consider(-sx / 2 / d.x, 1, 0, 0);
    if (d.y > 0) consider(sy / 2 / d.y, 0, -1, 0);
    if (d.y < 0) consider(-sy / 2 / d.y, 0, 1, 0);
    if (d.z > 0) consider((sz - cam_h) / d.z, 0, 0, -1);
    if (d.z < 0) consider(-cam_h / d.z, 0, 0, 1);
    if (!std::isfinite(best.t)) {
        return std::nullopt;
    }
    return best;
}

inline std::optional<Hit> cylinder_wall(const Dir& d, double r = 3.0, double z_min = -1.6, double z_max = 1.4)
{
    const double planar = std::hypot(d.x, d.y);
    if (planar < 1e-12) {
        return std::nullopt;
    }
    const double t = r / planar;
    const double z = t * d.z;
    if (z < z_min || z > z_max) {
        return std::nullopt;
    }
    return Hit{t, -d.x / planar, -d.y / planar, 0.0};
}

inline std::optional<Hit> floor_plane(const Dir& d, double floor_z = -1.6)
{
    if (d.z >= 0) {
        return std::nullopt;
    }
    return Hit{floor_z / d.z, 0.0, 0.0, 1.0};
}

inline double acos_deg(double c)
{
    return std::acos(std::clamp(c, -1.0, 1.0)) / kDeg;
}

inline int round_u8(double x)
{
    return static_cast<int>(std::clamp(std::floor(x + 0.5), 0.0, 255.0));
}

// Per-pixel relative encoding from analytic geometry: rectified depth, EGVIA, LOA.
struct RelPixel {
    double red, height, angle, lateral;
};

// A channel whose values differ only by rounding noise is constant.
inline bool spread(double lo, double hi)
{
    return hi - lo > 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

struct RelOracle {
    std::vector<RelPixel> px;
    std::vector<std::uint8_t> valid;
    std::vector<int> out; // 3 per pixel

    void finish(double lambda = 0.5, double alpha = 45.0)
    {
        double rmin = 1e300, rmax = -1e300, hmin = 1e300, hmax = -1e300;
        for (std::size_t i = 0; i < px.size(); ++i) {
            if (!valid[i]) continue;
            rmin = std::min(rmin, px[i].red);
            rmax = std::max(rmax, px[i].red);
            hmin = std::min(hmin, px[i].height);
            hmax = std::max(hmax, px[i].height);
        }
        out.assign(px.size() * 3, 0);
        for (std::size_t i = 0; i < px.size(); ++i) {
            if (!valid[i]) continue;
            const RelPixel& p = px[i];
            const double red = spread(rmin, rmax) ? (p.red - rmin) / (rmax - rmin) * 255.0 : 0.0;
            const double h_hat = spread(hmin, hmax) ? (p.height - hmin) / (hmax - hmin) * 255.0 : 0.0;
            const double a_hat = p.angle / 180.0 * 255.0;
            const bool blend = p.angle < alpha || p.angle > 180.0 - alpha;
            const double eg = blend ? lambda * a_hat + (1 - lambda) * h_hat : a_hat;
            out[3 * i + 0] = round_u8(red);
            out[3 * i + 1] = round_u8(eg);
            out[3 * i + 2] = round_u8(p.lateral / 180.0 * 255.0);
        }
    }
};

} // namespace oracle
