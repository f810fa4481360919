#pragma once

#include "panorel/cloud.hpp"
#include "panorel/image.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace panorel {

/// Weight and threshold of the height / vertical-angle blend.
struct EgviaParams {
    double lambda = 0.5;     ///< weight of the angle term on near-horizontal surfaces, [0, 1]
    double alpha_deg = 45.0; ///< surfaces within alpha of horizontal are blended, (0, 90)

    void validate() const;
};

enum class NormKind {
    angle,  ///< fixed map [0, 180] degrees -> [0, 255]
    linear, ///< per-image min/max over valid pixels -> [0, 255]
};

/// Value range used by a linear normalization.
struct NormRange {
    double min = 0.0;
    double max = 0.0;
};

/// Rounds half away from zero and clamps to [0, 255]. Values within 1e-9 of a
/// half step are rounded as exact ties.
std::uint8_t quantize(double value);

/// Min/max over the masked values. Throws Error("empty") when nothing is valid.
NormRange linear_range(std::span<const double> values, std::span<const std::uint8_t> valid);

/// Maps one value to [0, 255] without rounding. A degenerate linear range (span
/// below 1e-9 relative to its magnitude) maps to 0.
double normalize_value(double value, NormKind kind, const NormRange& range = {});

/// Normalizes and quantizes a whole channel; masked-out entries become 0.
std::vector<std::uint8_t> normalize_channel(std::span<const double> values, std::span<const std::uint8_t> valid,
                                            NormKind kind);

/// Planar distance to the vertical axis: d * cos(phi).
double rectified_depth(double depth, double phi_deg);

/// Lowest valid z of the cloud. Throws Error("empty") on an all-invalid cloud.
double floor_height(const PointCloud& cloud);

/// Height above the lowest point of the cloud.
double height(double p_z, const PointCloud& cloud);

/// arccos(N_z) in degrees: 0 for a floor, 90 for a wall, 180 for a camera-facing ceiling.
double vertical_angle(const UnitVec3& normal);

/// Blend of normalized angle and height. a_hat and h_hat are already in [0, 255].
double egvia(double angle_deg, double a_hat, double h_hat, const EgviaParams& params);

/// arccos(N_x cos(theta) + N_y sin(theta)) in degrees.
double lateral_angle(const UnitVec3& normal, double theta_deg);

/// Lateral orientation angle on the fixed angle scale, unrounded [0, 255].
double loa(const UnitVec3& normal, double theta_deg);

/// Three 8-bit channels plus a validity mask; invalid pixels are 0 in every channel.
class EncodedImage {
public:
    explicit EncodedImage(GridSpec grid) : channels_(grid, 3, 0), valid_(grid, 1, 0) {}

    const GridSpec& grid() const noexcept { return channels_.grid(); }
    std::uint8_t at(int u, int v, int c) const noexcept { return channels_.at(u, v, c); }
    bool valid(int u, int v) const noexcept { return valid_.at(u, v) != 0; }

    ErpImage<std::uint8_t>& channels() noexcept { return channels_; }
    const ErpImage<std::uint8_t>& channels() const noexcept { return channels_; }
    Mask& mask() noexcept { return valid_; }
    const Mask& mask() const noexcept { return valid_; }

    /// Copy of channel c as a single-channel image.
    ErpImage<std::uint8_t> channel(int c) const;

    friend bool operator==(const EncodedImage&, const EncodedImage&) = default;

private:
    ErpImage<std::uint8_t> channels_;
    Mask valid_;
};

/// Channels: rectified depth, EGVIA, LOA.
class RelImage : public EncodedImage {
public:
    using EncodedImage::EncodedImage;
    static constexpr int kRectifiedDepth = 0;
    static constexpr int kEgvia = 1;
    static constexpr int kLoa = 2;
};

/// Channels: H1 (inverse-depth disparity surrogate), H2 (height), A1 (vertical angle).
class HhaImage : public EncodedImage {
public:
    using EncodedImage::EncodedImage;
    static constexpr int kDisparity = 0;
    static constexpr int kHeight = 1;
    static constexpr int kAngle = 2;
};

/// Raw per-pixel geometry shared by both encoders.
struct GeometryChannels {
    explicit GeometryChannels(GridSpec g) : grid(g), valid(g, 1, 0) {}

    GridSpec grid;
    std::vector<double> rectified_depth; ///< meters
    std::vector<double> inverse_depth;   ///< 1 / meters
    std::vector<double> height;          ///< meters above the lowest point
    std::vector<double> vertical_angle;  ///< degrees
    std::vector<double> lateral_angle;   ///< degrees
    Mask valid;                          ///< point and normal both valid
};

GeometryChannels compute_geometry(const PointCloud& cloud, const NormalField& normals);

struct EncodeOptions {
    EgviaParams egvia;
    NormalOptions normals;
    /// Off: the ERP vertical axis is taken as gravity (rotation = identity).
    bool estimate_gravity = false;
    GravityOptions gravity;
    /// Kind used for the angle channels; linear gives per-image min/max (ablation).
    NormKind angle_norm = NormKind::angle;
    /// Fixed range for the rectified-depth channel instead of per-image min/max.
    std::optional<NormRange> rectified_depth_range;
};

/// Lifts depth, estimates normals, applies the optional gravity correction.
CorrectedGeometry prepare_geometry(const DepthImage& depth, const EncodeOptions& options);

RelImage encode_rel(const DepthImage& depth, const EncodeOptions& options = {});
RelImage encode_rel(const GeometryChannels& geometry, const EncodeOptions& options = {});

HhaImage encode_hha(const DepthImage& depth, const EncodeOptions& options = {});
HhaImage encode_hha(const GeometryChannels& geometry, const EncodeOptions& options = {});

struct HaProfile {
    std::vector<double> phi_deg; ///< row centers with at least one valid pixel
    std::vector<double> height_mean;
    std::vector<double> angle_mean;
    /// Pearson correlation of the two curves; NaN when either curve is constant.
    double correlation = 0.0;
};

HaProfile ha_profile(const ErpImage<std::uint8_t>& height_channel, const ErpImage<std::uint8_t>& angle_channel,
                     const Mask& valid);
HaProfile ha_profile(const HhaImage& hha);

} // namespace panorel
