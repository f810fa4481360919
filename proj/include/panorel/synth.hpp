#pragma once

#include "panorel/cloud.hpp"
#include "panorel/image.hpp"
#include "panorel/rotation.hpp"

#include <optional>
#include <string_view>

namespace panorel {

enum class SceneKind { box_room, cylinder_wall, floor_plane };

SceneKind parse_scene_kind(std::string_view name);

/// Semantic classes written by the generator.
namespace scene_label {
inline constexpr std::uint8_t floor = 0;
inline constexpr std::uint8_t ceiling = 1;
inline constexpr std::uint8_t wall = 2;
inline constexpr std::uint8_t furniture = 3;
inline constexpr std::uint8_t none = 255;
inline constexpr int count = 4;
} // namespace scene_label

/// Scene dimensions in meters. The camera sits at the origin of the world frame.
struct SceneDims {
    // box_room: axis-aligned room, walls at x = +-size_x/2 and y = +-size_y/2.
    double size_x = 4.0;
    double size_y = 6.0;
    double size_z = 3.0;
    double camera_height = 1.6; ///< above the floor (box_room)
    /// Adds a table and a cabinet to the box room.
    bool furnished = false;

    // cylinder_wall: open vertical cylinder around the camera.
    double radius = 3.0;
    double z_min = -1.6;
    double z_max = 1.4;

    // floor_plane: infinite plane z = floor_z.
    double floor_z = -1.6;

    /// Rays longer than this are left invalid; 0 disables the limit.
    double max_depth = 0.0;

    /// World-to-camera rotation; identity keeps the camera gravity-aligned.
    Rotation camera;
};

struct SceneHit {
    double distance; ///< meters along the unit ray
    Vec3 normal;     ///< unit, facing the camera
    std::uint8_t label;
};

/// Intersection of a camera-frame ray with the scene.
std::optional<SceneHit> cast_ray(SceneKind kind, const SceneDims& dims, const UnitVec3& camera_dir);

struct SyntheticScene {
    DepthImage depth;
    NormalField normals; ///< analytic, camera frame
    LabelImage labels;
};

SyntheticScene synth_scene(SceneKind kind, const SceneDims& dims, const GridSpec& grid);

} // namespace panorel
