#include "panorel/cloud.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace panorel {

std::size_t VectorField::valid_count() const noexcept
{
    std::size_t n = 0;
    for (auto m : valid_.data()) {
        n += m != 0;
    }
    return n;
}

PointCloud depth_to_cloud(const DepthImage& depth)
{
    const GridSpec& grid = depth.grid();
    PointCloud cloud(grid);
    for (int v = 0; v < grid.height(); ++v) {
        for (int u = 0; u < grid.width(); ++u) {
            if (!depth.valid(u, v)) {
                continue;
            }
            const UnitVec3 dir = sph_to_dir(pixel_to_sph(u, v, grid));
            cloud.set(u, v, depth.at(u, v) * dir.vec());
        }
    }
    return cloud;
}

int default_normal_window(const GridSpec& grid)
{
    int w = static_cast<int>(std::lround(7.0 * grid.width() / 4096.0));
    if (w % 2 == 0) {
        ++w;
    }
    return std::max(w, 3);
}

namespace {

struct PlaneFit {
    Vec3 normal;
    bool ok = false;
};

// Least-squares plane through the given points. Fails on fewer than three
// points or (near) collinear configurations.
PlaneFit fit_plane(std::span<const Vec3> pts)
{
    if (pts.size() < 3) {
        return {};
    }
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : pts) {
        centroid += p;
    }
    centroid /= static_cast<double>(pts.size());
    Mat3 cov = Mat3::Zero();
    for (const auto& p : pts) {
        const Vec3 d = p - centroid;
        cov.noalias() += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> solver(cov);
    if (solver.info() != Eigen::Success) {
        return {};
    }
    const Vec3 ev = solver.eigenvalues();
    if (!(ev(2) > 0.0) || ev(1) <= 1e-10 * ev(2)) {
        return {};
    }
    return {solver.eigenvectors().col(0).normalized(), true};
}

double max_residual(std::span<const Vec3> pts, const Vec3& origin, const Vec3& n)
{
    double worst = 0.0;
    for (const auto& q : pts) {
        worst = std::max(worst, std::abs(n.dot(q - origin)));
    }
    return worst;
}

Vec3 centroid_of(std::span<const Vec3> pts)
{
    Vec3 c = Vec3::Zero();
    for (const auto& p : pts) {
        c += p;
    }
    return c / static_cast<double>(pts.size());
}

// Fits a plane and drops the worst point until every residual is within
// max_residual_allowed or only three points remain. pts is left trimmed.
PlaneFit trimmed_fit(std::vector<Vec3>& pts, double max_residual_allowed)
{
    PlaneFit f = fit_plane(pts);
    while (f.ok && pts.size() > 3) {
        const Vec3 c = centroid_of(pts);
        std::size_t worst = 0;
        double worst_r = -1.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double r = std::abs(f.normal.dot(pts[k] - c));
            if (r > worst_r) {
                worst_r = r;
                worst = k;
            }
        }
        if (worst_r <= max_residual_allowed) {
            break;
        }
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(worst));
        f = fit_plane(pts);
    }
    return f;
}

} // namespace

NormalField estimate_normals(const PointCloud& cloud, const NormalOptions& options)
{
    const GridSpec& grid = cloud.grid();
    const int window = options.window == 0 ? default_normal_window(grid) : options.window;
    if (window < 3 || window % 2 == 0) {
        throw Error("invalid_argument", "normal window must be odd and >= 3");
    }
    const int r = window / 2;
    const int w = grid.width();
    const int h = grid.height();
    const double pitch = 2.0 * std::numbers::pi / w;

    // Compass offsets used to seed candidate planes when one plane does not explain the window.
    std::vector<std::array<int, 2>> seeds;
    for (int radius : {1, r}) {
        for (auto [du, dv] : std::array<std::array<int, 2>, 8>{
                 {{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}}}) {
            seeds.push_back({du * radius, dv * radius});
        }
        if (r == 1) {
            break;
        }
    }

    NormalField normals(grid);
    std::vector<Vec3> nbrs;
    std::vector<Vec3> seed_pts;
    std::vector<Vec3> inliers;
    std::vector<std::vector<bool>> candidates;
    nbrs.reserve(static_cast<std::size_t>(window * window));

    for (int v = 0; v < h; ++v) {
        const double phi = pixel_to_sph(0, v, grid).phi();
        if (std::abs(phi) > options.pole_limit_deg) {
            continue;
        }
        for (int u = 0; u < w; ++u) {
            if (!cloud.valid(u, v)) {
                continue;
            }
            const Vec3& p0 = cloud.at(u, v);
            nbrs.clear();
            std::size_t self = 0;
            for (int dv = -r; dv <= r; ++dv) {
                const int vv = v + dv;
                if (vv < 0 || vv >= h) {
                    continue;
                }
                for (int du = -r; du <= r; ++du) {
                    const int uu = ((u + du) % w + w) % w;
                    if (cloud.valid(uu, vv)) {
                        if (du == 0 && dv == 0) {
                            self = nbrs.size();
                        }
                        nbrs.push_back(cloud.at(uu, vv));
                    }
                }
            }
            const double tol = options.inlier_scale * pitch * p0.norm() + options.noise_floor;

            PlaneFit fit = fit_plane(nbrs);
            if (!fit.ok || max_residual(nbrs, centroid_of(nbrs), fit.normal) > tol) {
                // The window straddles a crease or an occlusion boundary. Planes
                // through p0 and pairs of compass neighbors propose inlier sets; each
                // set is refit without p0 and the plane p0 lies closest to wins.
                seed_pts.clear();
                for (const auto& [du, dv] : seeds) {
                    const int vv = v + dv;
                    const int uu = ((u + du) % w + w) % w;
                    if (vv >= 0 && vv < h && cloud.valid(uu, vv)) {
                        seed_pts.push_back(cloud.at(uu, vv) - p0);
                    }
                }
                candidates.clear();
                std::size_t most = 0;
                for (std::size_t i = 0; i < seed_pts.size(); ++i) {
                    for (std::size_t j = i + 1; j < seed_pts.size(); ++j) {
                        const Vec3 c = seed_pts[i].cross(seed_pts[j]);
                        const double scale = seed_pts[i].norm() * seed_pts[j].norm();
                        if (!(c.norm() > 1e-3 * scale)) {
                            continue;
                        }
                        const Vec3 n = c.normalized();
                        std::vector<bool> in(nbrs.size());
                        std::size_t count = 0;
                        for (std::size_t k = 0; k < nbrs.size(); ++k) {
                            in[k] = k != self && std::abs(n.dot(nbrs[k] - p0)) <= tol;
                            count += in[k];
                        }
                        if (count >= 3 && std::find(candidates.begin(), candidates.end(), in) == candidates.end()) {
                            candidates.push_back(std::move(in));
                            most = std::max(most, count);
                        }
                    }
                }
                // Among planes that pass through p0 (within tol),
                // take the one with the most surviving inliers.
                fit = {};
                bool through = false;
                double closest = std::numeric_limits<double>::infinity();
                std::size_t support = 0;
                for (const auto& in : candidates) {
                    const auto count = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
                    if (2 * count < most) {
                        continue;
                    }
                    inliers.clear();
                    for (std::size_t k = 0; k < nbrs.size(); ++k) {
                        if (in[k]) {
                            inliers.push_back(nbrs[k]);
                        }
                    }
                    const PlaneFit f = trimmed_fit(inliers, tol);
                    if (!f.ok) {
                        continue;
                    }
                    const double d = std::abs(f.normal.dot(p0 - centroid_of(inliers)));
                    const bool on = d <= tol;
                    const bool better = on != through ? on
                                        : on          ? inliers.size() > support ||
                                                   (inliers.size() == support && d < closest)
                                                      : d < closest;
                    if (better) {
                        through = on;
                        closest = d;
                        support = inliers.size();
                        inliers.push_back(p0);
                        fit = fit_plane(inliers);
                    }
                }
            }
            if (!fit.ok) {
                continue;
            }
            Vec3 n = fit.normal;
            if (n.dot(p0) > 0.0) {
                n = -n;
            }
            normals.set(u, v, n);
        }
    }
    return normals;
}

double gravity_alignment_score(const NormalField& normals, const UnitVec3& axis, double threshold_deg)
{
    const double cut = cos_deg(threshold_deg);
    double residual = 0.0;
    std::size_t count = 0;
    for (int v = 0; v < normals.height(); ++v) {
        for (int u = 0; u < normals.width(); ++u) {
            if (!normals.valid(u, v)) {
                continue;
            }
            const double c = std::abs(normals.at(u, v).dot(axis.vec()));
            residual += c >= cut ? 1.0 - c * c : c * c;
            ++count;
        }
    }
    if (count == 0) {
        return 0.0;
    }
    return 1.0 - 2.0 * residual / static_cast<double>(count);
}

GravityEstimate estimate_gravity(const NormalField& normals, const GravityOptions& options)
{
    const std::size_t valid = normals.valid_count();
    const double needed = options.min_valid_fraction * static_cast<double>(normals.grid().pixel_count());
    if (valid == 0 || static_cast<double>(valid) < needed) {
        throw Error("insufficient_normals", "insufficient normals for gravity estimation");
    }
    const double cut = cos_deg(options.threshold_deg);
    const Vec3 down(0.0, 0.0, -1.0);
    Vec3 axis = down;
    for (int it = 0; it < options.iterations; ++it) {
        Mat3 m = Mat3::Zero();
        for (int v = 0; v < normals.height(); ++v) {
            for (int u = 0; u < normals.width(); ++u) {
                if (!normals.valid(u, v)) {
                    continue;
                }
                const Vec3& n = normals.at(u, v);
                const Mat3 outer = n * n.transpose();
                if (std::abs(n.dot(axis)) >= cut) {
                    m -= outer;
                } else {
                    m += outer;
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Mat3> solver(m);
        Vec3 next = solver.eigenvectors().col(0).normalized();
        if (next.dot(axis) < 0.0) {
            next = -next;
        }
        const bool converged = (next - axis).norm() < 1e-12;
        axis = next;
        if (converged) {
            break;
        }
    }
    GravityEstimate est;
    est.g_hat = UnitVec3::normalized(axis);
    est.rotation = Rotation::between(est.g_hat, UnitVec3(0.0, 0.0, -1.0));
    est.alignment_score = gravity_alignment_score(normals, est.g_hat, options.threshold_deg);
    est.low_confidence = est.alignment_score < options.confidence_threshold;
    return est;
}

CorrectedGeometry gravity_correct(const PointCloud& cloud, const NormalField& normals, const GravityEstimate& g)
{
    if (!(cloud.grid() == normals.grid())) {
        throw Error("shape_mismatch", "cloud and normal field grids differ");
    }
    if (g.rotation.is_identity()) {
        return {cloud, normals};
    }
    CorrectedGeometry out{PointCloud(cloud.grid()), NormalField(normals.grid())};
    for (int v = 0; v < cloud.height(); ++v) {
        for (int u = 0; u < cloud.width(); ++u) {
            if (cloud.valid(u, v)) {
                out.cloud.set(u, v, g.rotation.apply(cloud.at(u, v)));
            }
            if (normals.valid(u, v)) {
                out.normals.set(u, v, g.rotation.apply(normals.at(u, v)));
            }
        }
    }
    return out;
}

} // namespace panorel
