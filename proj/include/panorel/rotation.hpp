#pragma once

#include "panorel/coords.hpp"

namespace panorel {

/// Proper 3x3 rotation (orthonormal, det +1). Checked to 1e-9 on construction.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}
    explicit Rotation(const Mat3& m);

    static Rotation identity() { return Rotation(); }
    /// Right-handed rotations about the coordinate axes, angles in degrees.
    static Rotation about_x(double deg);
    static Rotation about_y(double deg);
    static Rotation about_z(double deg);
    /// Smallest rotation taking `from` onto `to`.
    static Rotation between(const UnitVec3& from, const UnitVec3& to);

    const Mat3& matrix() const noexcept { return m_; }
    Rotation inverse() const { return Rotation(m_.transpose(), Trusted{}); }
    bool is_identity() const { return m_ == Mat3::Identity(); }

    Vec3 apply(const Vec3& v) const { return m_ * v; }

    friend Rotation operator*(const Rotation& a, const Rotation& b) { return Rotation(a.m_ * b.m_, Trusted{}); }

private:
    struct Trusted {};
    Rotation(const Mat3& m, Trusted) : m_(m) {}

    Mat3 m_;
};

/// Yaw / pitch / roll disturbance in degrees. The matrix is composed as
/// Rz(yaw) * Rx(pitch) * Ry(roll), so a pure yaw is a rotation about the vertical axis.
struct RotationSpec {
    double alpha = 0.0; ///< yaw
    double beta = 0.0;  ///< pitch
    double gamma = 0.0; ///< roll

    Rotation rotation() const
    {
        return Rotation::about_z(alpha) * Rotation::about_x(beta) * Rotation::about_y(gamma);
    }

    friend bool operator==(const RotationSpec&, const RotationSpec&) = default;
};

} // namespace panorel
