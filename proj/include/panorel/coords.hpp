#pragma once

#include <Eigen/Core>

namespace panorel {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// sin/cos of an angle in degrees, exact at multiples of 90 degrees and
/// symmetric under quarter-turn shifts (sin_deg(x + 90) == cos_deg(x)).
double sin_deg(double deg);
double cos_deg(double deg);

/// Wraps an azimuth into [-180, 180).
double wrap_azimuth(double deg);

/// Equirectangular pixel grid covering 360 x 180 degrees (width == 2 * height).
class GridSpec {
public:
    GridSpec(int width, int height);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept
    {
        return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    }

    /// Grid with the given height and twice that width.
    static GridSpec from_height(int height) { return GridSpec(2 * height, height); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    int width_;
    int height_;
};

/// Azimuth theta in [-180, 180) and elevation phi in [-90, 90], degrees.
/// theta = 0 looks along +y, theta = 90 along +x, phi = 90 is the zenith (+z).
class SphericalDir {
public:
    /// Wraps theta; throws Error("out_of_range") when phi is outside [-90, 90].
    SphericalDir(double theta_deg, double phi_deg);

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

private:
    double theta_;
    double phi_;
};

/// A direction with unit norm (checked to 1e-9 on construction).
class UnitVec3 {
public:
    UnitVec3(double x, double y, double z);
    explicit UnitVec3(const Vec3& v) : UnitVec3(v.x(), v.y(), v.z()) {}

    /// Normalizes an arbitrary nonzero vector.
    static UnitVec3 normalized(const Vec3& v);

    double x() const noexcept { return v_.x(); }
    double y() const noexcept { return v_.y(); }
    double z() const noexcept { return v_.z(); }
    const Vec3& vec() const noexcept { return v_; }

private:
    struct Unchecked {};
    UnitVec3(const Vec3& v, Unchecked) : v_(v) {}

    Vec3 v_;
};

struct PixelCoord {
    double u;
    double v;
};

struct Cylindrical {
    double rho;   ///< planar distance to the vertical axis, meters
    double theta; ///< degrees, same azimuth convention as SphericalDir
    double z;     ///< meters
};

/// Pixel (u, v) to direction angles using pixel centers at (u + 0.5, v + 0.5).
/// u wraps horizontally; v outside [-0.5, height - 0.5] throws Error("out_of_range").
SphericalDir pixel_to_sph(double u, double v, const GridSpec& grid);

/// Inverse of pixel_to_sph; u is canonicalized into [0, width).
PixelCoord sph_to_pixel(const SphericalDir& dir, const GridSpec& grid);

/// (sin(theta) cos(phi), cos(theta) cos(phi), sin(phi)).
UnitVec3 sph_to_dir(const SphericalDir& dir);

/// Inverse of sph_to_dir. At the poles theta is reported as 0.
SphericalDir dir_to_sph(const UnitVec3& v);

/// On the axis (rho == 0) theta is reported as 0.
Cylindrical cart_to_cyl(const Vec3& p);
Vec3 cyl_to_cart(const Cylindrical& c);

} // namespace panorel
