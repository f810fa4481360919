#include "panorel/rel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace panorel {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kTieTolerance = 1e-9;
constexpr double kDegenerateSpan = 1e-9;

double acos_deg(double c)
{
    return std::acos(std::clamp(c, -1.0, 1.0)) * kRadToDeg;
}

} // namespace

void EgviaParams::validate() const
{
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw Error("invalid_argument", "lambda must lie in [0, 1]");
    }
    if (!(alpha_deg > 0.0 && alpha_deg < 90.0)) {
        throw Error("invalid_argument", "alpha must lie in (0, 90) degrees");
    }
}

std::uint8_t quantize(double value)
{
    // Values within kTieTolerance of a half step count as the tie, so rounding
    // noise cannot split 127.5 (a vertical normal) between 127 and 128.
    const double lower = std::floor(value);
    const double r = std::abs(value - (lower + 0.5)) <= kTieTolerance ? (value < 0.0 ? lower : lower + 1.0)
                                                                      : std::round(value);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

NormRange linear_range(std::span<const double> values, std::span<const std::uint8_t> valid)
{
    NormRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (valid[i] == 0) {
            continue;
        }
        r.min = std::min(r.min, values[i]);
        r.max = std::max(r.max, values[i]);
        any = true;
    }
    if (!any) {
        throw Error("empty", "cannot normalize a channel without valid pixels");
    }
    return r;
}

double normalize_value(double value, NormKind kind, const NormRange& range)
{
    if (kind == NormKind::angle) {
        return std::clamp(value / 180.0 * 255.0, 0.0, 255.0);
    }
    // A span at rounding-noise level (e.g. heights over a level floor) is degenerate.
    const double span = range.max - range.min;
    const double scale = std::max({1.0, std::abs(range.min), std::abs(range.max)});
    if (!(span > kDegenerateSpan * scale)) {
        return 0.0;
    }
    return std::clamp((value - range.min) / span * 255.0, 0.0, 255.0);
}

std::vector<std::uint8_t> normalize_channel(std::span<const double> values, std::span<const std::uint8_t> valid,
                                            NormKind kind)
{
    if (values.size() != valid.size()) {
        throw Error("shape_mismatch", "channel and mask sizes differ");
    }
    const NormRange range = linear_range(values, valid);
    std::vector<std::uint8_t> out(values.size(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (valid[i] != 0) {
            out[i] = quantize(normalize_value(values[i], kind, range));
        }
    }
    return out;
}

double rectified_depth(double depth, double phi_deg)
{
    return depth * cos_deg(phi_deg);
}

double floor_height(const PointCloud& cloud)
{
    double lowest = std::numeric_limits<double>::infinity();
    for (int v = 0; v < cloud.height(); ++v) {
        for (int u = 0; u < cloud.width(); ++u) {
            if (cloud.valid(u, v)) {
                lowest = std::min(lowest, cloud.at(u, v).z());
            }
        }
    }
    if (!std::isfinite(lowest)) {
        throw Error("empty", "point cloud has no valid points");
    }
    return lowest;
}

double height(double p_z, const PointCloud& cloud)
{
    return p_z - floor_height(cloud);
}

double vertical_angle(const UnitVec3& normal)
{
    return acos_deg(normal.z());
}

double egvia(double angle_deg, double a_hat, double h_hat, const EgviaParams& params)
{
    const bool near_horizontal = angle_deg < params.alpha_deg || angle_deg > 180.0 - params.alpha_deg;
    if (near_horizontal) {
        return params.lambda * a_hat + (1.0 - params.lambda) * h_hat;
    }
    return a_hat;
}

double lateral_angle(const UnitVec3& normal, double theta_deg)
{
    return acos_deg(normal.x() * cos_deg(theta_deg) + normal.y() * sin_deg(theta_deg));
}

double loa(const UnitVec3& normal, double theta_deg)
{
    return normalize_value(lateral_angle(normal, theta_deg), NormKind::angle);
}

ErpImage<std::uint8_t> EncodedImage::channel(int c) const
{
    ErpImage<std::uint8_t> out(grid(), 1, 0);
    for (int v = 0; v < grid().height(); ++v) {
        for (int u = 0; u < grid().width(); ++u) {
            out.at(u, v) = channels_.at(u, v, c);
        }
    }
    return out;
}

GeometryChannels compute_geometry(const PointCloud& cloud, const NormalField& normals)
{
    if (!(cloud.grid() == normals.grid())) {
        throw Error("shape_mismatch", "cloud and normal field grids differ");
    }
    const GridSpec grid = cloud.grid();
    const std::size_t n = grid.pixel_count();
    GeometryChannels g(grid);
    g.rectified_depth.assign(n, 0.0);
    g.inverse_depth.assign(n, 0.0);
    g.height.assign(n, 0.0);
    g.vertical_angle.assign(n, 0.0);
    g.lateral_angle.assign(n, 0.0);

    const double lowest = floor_height(cloud);
    for (int v = 0; v < grid.height(); ++v) {
        for (int u = 0; u < grid.width(); ++u) {
            if (!cloud.valid(u, v) || !normals.valid(u, v)) {
                continue;
            }
            const std::size_t i = static_cast<std::size_t>(v) * grid.width() + u;
            const Vec3& p = cloud.at(u, v);
            const UnitVec3 normal = UnitVec3::normalized(normals.at(u, v));
            const Cylindrical cyl = cart_to_cyl(p);
            g.rectified_depth[i] = cyl.rho;
            g.inverse_depth[i] = 1.0 / p.norm();
            g.height[i] = p.z() - lowest;
            g.vertical_angle[i] = vertical_angle(normal);
            g.lateral_angle[i] = lateral_angle(normal, cyl.theta);
            g.valid.at(u, v) = 1;
        }
    }
    return g;
}

CorrectedGeometry prepare_geometry(const DepthImage& depth, const EncodeOptions& options)
{
    PointCloud cloud = depth_to_cloud(depth);
    NormalField normals = estimate_normals(cloud, options.normals);
    if (!options.estimate_gravity) {
        return {std::move(cloud), std::move(normals)};
    }
    const GravityEstimate g = estimate_gravity(normals, options.gravity);
    return gravity_correct(cloud, normals, g);
}

namespace {

bool any_valid(const Mask& m)
{
    return std::any_of(m.data().begin(), m.data().end(), [](std::uint8_t x) { return x != 0; });
}

GeometryChannels geometry_or_empty(const DepthImage& depth, const EncodeOptions& options)
{
    if (depth.valid_count() == 0) {
        return GeometryChannels(depth.grid());
    }
    const CorrectedGeometry geo = prepare_geometry(depth, options);
    return compute_geometry(geo.cloud, geo.normals);
}

} // namespace

RelImage encode_rel(const GeometryChannels& g, const EncodeOptions& options)
{
    options.egvia.validate();
    RelImage out(g.grid);
    if (!any_valid(g.valid)) {
        return out;
    }
    const auto mask = g.valid.data();
    const NormRange red = options.rectified_depth_range.value_or(linear_range(g.rectified_depth, mask));
    const NormRange hgt = linear_range(g.height, mask);
    const NormRange ang = linear_range(g.vertical_angle, mask);
    const NormRange lat = linear_range(g.lateral_angle, mask);

    auto& ch = out.channels();
    for (int v = 0; v < g.grid.height(); ++v) {
        for (int u = 0; u < g.grid.width(); ++u) {
            if (g.valid.at(u, v) == 0) {
                continue;
            }
            const std::size_t i = static_cast<std::size_t>(v) * g.grid.width() + u;
            const double a_hat = normalize_value(g.vertical_angle[i], options.angle_norm, ang);
            const double h_hat = normalize_value(g.height[i], NormKind::linear, hgt);
            ch.at(u, v, RelImage::kRectifiedDepth) =
                quantize(normalize_value(g.rectified_depth[i], NormKind::linear, red));
            ch.at(u, v, RelImage::kEgvia) = quantize(egvia(g.vertical_angle[i], a_hat, h_hat, options.egvia));
            ch.at(u, v, RelImage::kLoa) = quantize(normalize_value(g.lateral_angle[i], options.angle_norm, lat));
            out.mask().at(u, v) = 1;
        }
    }
    return out;
}

RelImage encode_rel(const DepthImage& depth, const EncodeOptions& options)
{
    return encode_rel(geometry_or_empty(depth, options), options);
}

HhaImage encode_hha(const GeometryChannels& g, const EncodeOptions& options)
{
    HhaImage out(g.grid);
    if (!any_valid(g.valid)) {
        return out;
    }
    const auto mask = g.valid.data();
    const NormRange disp = linear_range(g.inverse_depth, mask);
    const NormRange hgt = linear_range(g.height, mask);
    const NormRange ang = linear_range(g.vertical_angle, mask);

    auto& ch = out.channels();
    for (int v = 0; v < g.grid.height(); ++v) {
        for (int u = 0; u < g.grid.width(); ++u) {
            if (g.valid.at(u, v) == 0) {
                continue;
            }
            const std::size_t i = static_cast<std::size_t>(v) * g.grid.width() + u;
            ch.at(u, v, HhaImage::kDisparity) = quantize(normalize_value(g.inverse_depth[i], NormKind::linear, disp));
            ch.at(u, v, HhaImage::kHeight) = quantize(normalize_value(g.height[i], NormKind::linear, hgt));
            ch.at(u, v, HhaImage::kAngle) = quantize(normalize_value(g.vertical_angle[i], options.angle_norm, ang));
            out.mask().at(u, v) = 1;
        }
    }
    return out;
}

HhaImage encode_hha(const DepthImage& depth, const EncodeOptions& options)
{
    return encode_hha(geometry_or_empty(depth, options), options);
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b)
{
    const auto n = static_cast<double>(a.size());
    if (a.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

} // namespace

HaProfile ha_profile(const ErpImage<std::uint8_t>& height_channel, const ErpImage<std::uint8_t>& angle_channel,
                     const Mask& valid)
{
    if (!(height_channel.grid() == angle_channel.grid()) || !(valid.grid() == height_channel.grid())) {
        throw Error("shape_mismatch", "profile channels must share one grid");
    }
    const GridSpec& grid = valid.grid();
    HaProfile prof;
    for (int v = 0; v < grid.height(); ++v) {
        double hs = 0.0;
        double as = 0.0;
        int count = 0;
        for (int u = 0; u < grid.width(); ++u) {
            if (valid.at(u, v) == 0) {
                continue;
            }
            hs += height_channel.at(u, v);
            as += angle_channel.at(u, v);
            ++count;
        }
        if (count == 0) {
            continue;
        }
        prof.phi_deg.push_back(pixel_to_sph(0, v, grid).phi());
        prof.height_mean.push_back(hs / count);
        prof.angle_mean.push_back(as / count);
    }
    prof.correlation = pearson(prof.height_mean, prof.angle_mean);
    return prof;
}

HaProfile ha_profile(const HhaImage& hha)
{
    return ha_profile(hha.channel(HhaImage::kHeight), hha.channel(HhaImage::kAngle), hha.mask());
}

} // namespace panorel
