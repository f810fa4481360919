#pragma once

#include "panorel/coords.hpp"
#include "panorel/image.hpp"
#include "panorel/rotation.hpp"

namespace panorel {

/// Per-pixel 3-vectors on an ERP grid with a validity mask.
class VectorField {
public:
    explicit VectorField(GridSpec grid) : values_(grid, 1, Vec3::Zero()), valid_(grid, 1, 0) {}

    const GridSpec& grid() const noexcept { return values_.grid(); }
    int width() const noexcept { return values_.width(); }
    int height() const noexcept { return values_.height(); }

    bool valid(int u, int v) const noexcept { return valid_.at(u, v) != 0; }
    const Vec3& at(int u, int v) const noexcept { return values_.at(u, v); }

    void set(int u, int v, const Vec3& value)
    {
        values_.at(u, v) = value;
        valid_.at(u, v) = 1;
    }
    void invalidate(int u, int v)
    {
        values_.at(u, v) = Vec3::Zero();
        valid_.at(u, v) = 0;
    }

    const Mask& mask() const noexcept { return valid_; }
    std::size_t valid_count() const noexcept;

    friend bool operator==(const VectorField&, const VectorField&) = default;

private:
    ErpImage<Vec3> values_;
    Mask valid_;
};

/// Gravity-corrected camera-frame points, meters.
class PointCloud : public VectorField {
public:
    using VectorField::VectorField;
};

/// Unit surface normals oriented toward the camera.
class NormalField : public VectorField {
public:
    using VectorField::VectorField;
};

struct NormalOptions {
    /// Odd fitting window in pixels; 0 selects default_normal_window(grid).
    int window = 0;
    /// Neighbors farther than inlier_scale * (pixel angular pitch) * |p| + noise_floor
    /// from a candidate plane are treated as belonging to another surface.
    double inlier_scale = 0.05;
    double noise_floor = 0.0;
    /// Rows with |phi| above this are left invalid.
    double pole_limit_deg = 88.0;
};

/// 7 px at 4096 columns, scaled with width, forced odd and >= 3.
int default_normal_window(const GridSpec& grid);

struct GravityOptions {
    int iterations = 5;
    /// Normals within this angle of the axis count as horizontal surfaces.
    double threshold_deg = 45.0;
    double min_valid_fraction = 0.01;
    /// Alignment scores below this are flagged low confidence.
    double confidence_threshold = 0.8;
};

struct GravityEstimate {
    UnitVec3 g_hat{0.0, 0.0, -1.0};
    /// Maps g_hat onto (0, 0, -1).
    Rotation rotation;
    /// 1 for a perfectly axis-aligned scene; about 0.61 for isotropic normals.
    double alignment_score = 1.0;
    bool low_confidence = false;
};

/// p = d * sph_to_dir(pixel_to_sph(u, v)); invalid depth stays invalid.
PointCloud depth_to_cloud(const DepthImage& depth);

NormalField estimate_normals(const PointCloud& cloud, const NormalOptions& options = {});

/// Alternating parallel / orthogonal axis refinement starting from (0, 0, -1).
/// Throws Error("insufficient_normals") below options.min_valid_fraction.
GravityEstimate estimate_gravity(const NormalField& normals, const GravityOptions& options = {});

/// Score of a candidate gravity axis over the valid normals (see GravityEstimate).
double gravity_alignment_score(const NormalField& normals, const UnitVec3& axis, double threshold_deg = 45.0);

struct CorrectedGeometry {
    PointCloud cloud;
    NormalField normals;
};

CorrectedGeometry gravity_correct(const PointCloud& cloud, const NormalField& normals, const GravityEstimate& g);

} // namespace panorel
