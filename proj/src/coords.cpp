#include "panorel/coords.hpp"

#include "panorel/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace panorel {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Splits deg into a quadrant k in [0, 4) and an exact remainder in [-45, 45],
// so that shifting by a multiple of 90 degrees permutes sin / cos exactly.
int quadrant(double deg, double& rest)
{
    int quo = 0;
    rest = std::remquo(deg, 90.0, &quo);
    return ((quo % 4) + 4) % 4;
}

} // namespace

double sin_deg(double deg)
{
    double r = 0.0;
    switch (quadrant(deg, r)) {
    case 0: return std::sin(r * kDegToRad);
    case 1: return std::cos(r * kDegToRad);
    case 2: return -std::sin(r * kDegToRad);
    default: return -std::cos(r * kDegToRad);
    }
}

double cos_deg(double deg)
{
    double r = 0.0;
    switch (quadrant(deg, r)) {
    case 0: return std::cos(r * kDegToRad);
    case 1: return -std::sin(r * kDegToRad);
    case 2: return -std::cos(r * kDegToRad);
    default: return std::sin(r * kDegToRad);
    }
}

double wrap_azimuth(double deg)
{
    double t = std::fmod(deg + 180.0, 360.0);
    if (t < 0.0) {
        t += 360.0;
    }
    if (t >= 360.0) {
        t -= 360.0;
    }
    return t - 180.0;
}

GridSpec::GridSpec(int width, int height) : width_(width), height_(height)
{
    if (height < 1 || width < 2 || width != 2 * height) {
        throw Error("invalid_grid", "equirectangular grid must satisfy width == 2 * height >= 2, got " +
                                        std::to_string(width) + "x" + std::to_string(height));
    }
}

SphericalDir::SphericalDir(double theta_deg, double phi_deg)
{
    if (!std::isfinite(theta_deg) || !(phi_deg >= -90.0 && phi_deg <= 90.0)) {
        throw Error("out_of_range", "elevation must lie in [-90, 90] degrees, got " + std::to_string(phi_deg));
    }
    theta_ = wrap_azimuth(theta_deg);
    phi_ = phi_deg;
}

UnitVec3::UnitVec3(double x, double y, double z) : v_(x, y, z)
{
    if (!(std::abs(v_.squaredNorm() - 1.0) <= 1e-9)) {
        throw Error("not_unit", "vector is not unit length");
    }
}

UnitVec3 UnitVec3::normalized(const Vec3& v)
{
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error("not_unit", "cannot normalize a zero or non-finite vector");
    }
    return UnitVec3(v / n, Unchecked{});
}

SphericalDir pixel_to_sph(double u, double v, const GridSpec& grid)
{
    const double w = grid.width();
    const double h = grid.height();
    if (!(v >= -0.5 && v <= h - 0.5) || !std::isfinite(u)) {
        throw Error("out_of_range", "pixel row " + std::to_string(v) + " outside the image");
    }
    const double theta = ((u + 0.5) / w) * 360.0 - 180.0;
    const double phi = 90.0 - ((v + 0.5) / h) * 180.0;
    return SphericalDir(theta, phi);
}

PixelCoord sph_to_pixel(const SphericalDir& dir, const GridSpec& grid)
{
    const double w = grid.width();
    const double h = grid.height();
    double u = (dir.theta() + 180.0) / 360.0 * w - 0.5;
    if (u < 0.0) {
        u += w;
    }
    if (u >= w) {
        u -= w;
    }
    const double v = (90.0 - dir.phi()) / 180.0 * h - 0.5;
    return {u, v};
}

UnitVec3 sph_to_dir(const SphericalDir& dir)
{
    const double st = sin_deg(dir.theta());
    const double ct = cos_deg(dir.theta());
    const double sp = sin_deg(dir.phi());
    const double cp = cos_deg(dir.phi());
    return UnitVec3(st * cp, ct * cp, sp);
}

SphericalDir dir_to_sph(const UnitVec3& v)
{
    const double planar = std::hypot(v.x(), v.y());
    const double phi = std::atan2(v.z(), planar) * kRadToDeg;
    const double theta = planar == 0.0 ? 0.0 : std::atan2(v.x(), v.y()) * kRadToDeg;
    return SphericalDir(theta, phi);
}

Cylindrical cart_to_cyl(const Vec3& p)
{
    const double rho = std::hypot(p.x(), p.y());
    const double theta = rho == 0.0 ? 0.0 : wrap_azimuth(std::atan2(p.x(), p.y()) * kRadToDeg);
    return {rho, theta, p.z()};
}

Vec3 cyl_to_cart(const Cylindrical& c)
{
    return {c.rho * sin_deg(c.theta), c.rho * cos_deg(c.theta), c.z};
}

} // namespace panorel
