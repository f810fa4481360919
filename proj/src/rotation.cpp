#include "panorel/rotation.hpp"

#include "panorel/error.hpp"

#include <Eigen/Geometry>

#include <cmath>

namespace panorel {

Rotation::Rotation(const Mat3& m) : m_(m)
{
    const double ortho = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (!(ortho <= 1e-9) || !(std::abs(m.determinant() - 1.0) <= 1e-9)) {
        throw Error("not_rotation", "matrix is not a proper rotation");
    }
}

Rotation Rotation::about_x(double deg)
{
    const double c = cos_deg(deg);
    const double s = sin_deg(deg);
    Mat3 m;
    m << 1, 0, 0, 0, c, -s, 0, s, c;
    return Rotation(m, Trusted{});
}

Rotation Rotation::about_y(double deg)
{
    const double c = cos_deg(deg);
    const double s = sin_deg(deg);
    Mat3 m;
    m << c, 0, s, 0, 1, 0, -s, 0, c;
    return Rotation(m, Trusted{});
}

Rotation Rotation::about_z(double deg)
{
    const double c = cos_deg(deg);
    const double s = sin_deg(deg);
    Mat3 m;
    m << c, -s, 0, s, c, 0, 0, 0, 1;
    return Rotation(m, Trusted{});
}

Rotation Rotation::between(const UnitVec3& from, const UnitVec3& to)
{
    if ((from.vec() - to.vec()).norm() == 0.0) {
        return Rotation();
    }
    const Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(from.vec(), to.vec());
    return Rotation(q.normalized().toRotationMatrix(), Trusted{});
}

} // namespace panorel
