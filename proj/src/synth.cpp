#include "panorel/synth.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace panorel {

SceneKind parse_scene_kind(std::string_view name)
{
    if (name == "box_room") {
        return SceneKind::box_room;
    }
    if (name == "cylinder_wall") {
        return SceneKind::cylinder_wall;
    }
    if (name == "floor_plane") {
        return SceneKind::floor_plane;
    }
    throw Error("invalid_argument", "unknown scene kind " + std::string(name));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
    Vec3 lo;
    Vec3 hi;
};

// Exit point of a ray starting inside the box.
std::optional<SceneHit> inside_box(const Box& b, const Vec3& d)
{
    double best = kInf;
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
        if (d[i] > 0.0) {
            const double t = b.hi[i] / d[i];
            if (t < best) {
                best = t;
                axis = i;
            }
        } else if (d[i] < 0.0) {
            const double t = b.lo[i] / d[i];
            if (t < best) {
                best = t;
                axis = i;
            }
        }
    }
    if (axis < 0) {
        return std::nullopt;
    }
    Vec3 n = Vec3::Zero();
    n[axis] = d[axis] > 0.0 ? -1.0 : 1.0;
    std::uint8_t label = scene_label::wall;
    if (axis == 2) {
        label = d[2] < 0.0 ? scene_label::floor : scene_label::ceiling;
    }
    return SceneHit{best, n, label};
}

// Entry point of a ray starting outside the box (slab method).
std::optional<SceneHit> outside_box(const Box& b, const Vec3& d)
{
    double t_near = -kInf;
    double t_far = kInf;
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
        if (d[i] == 0.0) {
            if (b.lo[i] > 0.0 || b.hi[i] < 0.0) {
                return std::nullopt;
            }
            continue;
        }
        double t0 = b.lo[i] / d[i];
        double t1 = b.hi[i] / d[i];
        if (t0 > t1) {
            std::swap(t0, t1);
        }
        if (t0 > t_near) {
            t_near = t0;
            axis = i;
        }
        t_far = std::min(t_far, t1);
    }
    if (axis < 0 || t_near > t_far || t_near <= 0.0) {
        return std::nullopt;
    }
    Vec3 n = Vec3::Zero();
    n[axis] = d[axis] > 0.0 ? -1.0 : 1.0;
    return SceneHit{t_near, n, scene_label::furniture};
}

std::optional<SceneHit> world_hit(SceneKind kind, const SceneDims& dims, const Vec3& d)
{
    switch (kind) {
    case SceneKind::floor_plane: {
        if (!(d.z() < 0.0) || !(dims.floor_z < 0.0)) {
            return std::nullopt;
        }
        return SceneHit{dims.floor_z / d.z(), Vec3(0.0, 0.0, 1.0), scene_label::floor};
    }
    case SceneKind::cylinder_wall: {
        const double planar = std::hypot(d.x(), d.y());
        if (planar == 0.0) {
            return std::nullopt;
        }
        const double t = dims.radius / planar;
        const double z = t * d.z();
        if (z < dims.z_min || z > dims.z_max) {
            return std::nullopt;
        }
        const Vec3 n(-d.x() / planar, -d.y() / planar, 0.0);
        return SceneHit{t, n, scene_label::wall};
    }
    case SceneKind::box_room: {
        const double floor_z = -dims.camera_height;
        const double ceiling_z = dims.size_z - dims.camera_height;
        const Box room{{-dims.size_x / 2, -dims.size_y / 2, floor_z}, {dims.size_x / 2, dims.size_y / 2, ceiling_z}};
        auto hit = inside_box(room, d);
        if (hit && dims.furnished) {
            const std::array<Box, 2> furniture{{
                {{0.5, 1.0, floor_z}, {1.5, 2.0, floor_z + 0.75}},    // table
                {{-1.9, -2.0, floor_z}, {-1.3, -0.5, floor_z + 1.8}}, // cabinet
            }};
            for (const auto& b : furniture) {
                if (auto f = outside_box(b, d); f && f->distance < hit->distance) {
                    hit = f;
                }
            }
        }
        return hit;
    }
    }
    return std::nullopt;
}

} // namespace

std::optional<SceneHit> cast_ray(SceneKind kind, const SceneDims& dims, const UnitVec3& camera_dir)
{
    const Vec3 world_dir = dims.camera.matrix().transpose() * camera_dir.vec();
    auto hit = world_hit(kind, dims, world_dir);
    if (!hit || !(hit->distance > 0.0) || !std::isfinite(hit->distance)) {
        return std::nullopt;
    }
    if (dims.max_depth > 0.0 && hit->distance > dims.max_depth) {
        return std::nullopt;
    }
    hit->normal = dims.camera.apply(hit->normal);
    return hit;
}

SyntheticScene synth_scene(SceneKind kind, const SceneDims& dims, const GridSpec& grid)
{
    const bool bad_box = !(dims.size_x > 0 && dims.size_y > 0 && dims.size_z > dims.camera_height &&
                           dims.camera_height > 0);
    const bool bad_cyl = !(dims.radius > 0 && dims.z_max > dims.z_min);
    const bool bad_floor = !(dims.floor_z < 0);
    if ((kind == SceneKind::box_room && bad_box) || (kind == SceneKind::cylinder_wall && bad_cyl) ||
        (kind == SceneKind::floor_plane && bad_floor)) {
        throw Error("invalid_argument", "degenerate scene dimensions");
    }
    SyntheticScene s{DepthImage(grid), NormalField(grid), LabelImage(grid, 1, scene_label::none)};
    for (int v = 0; v < grid.height(); ++v) {
        for (int u = 0; u < grid.width(); ++u) {
            const auto hit = cast_ray(kind, dims, sph_to_dir(pixel_to_sph(u, v, grid)));
            if (!hit) {
                continue;
            }
            s.depth.set(u, v, hit->distance);
            s.normals.set(u, v, hit->normal);
            s.labels.at(u, v) = hit->label;
        }
    }
    return s;
}

} // namespace panorel
