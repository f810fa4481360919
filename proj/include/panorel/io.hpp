#pragma once

#include "panorel/image.hpp"
#include "panorel/rel.hpp"
#include "panorel/sga.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace panorel {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// PNG

struct PngInfo {
    int width = 0;
    int height = 0;
    int channels = 0; ///< 1 gray, 2 gray+alpha, 3 rgb, 4 rgba
    int bit_depth = 0; ///< 8 or 16 after expansion of low bit depths and palettes
};

/// Decoded samples, interleaved row-major, widened to 16 bits.
struct PngImage {
    PngInfo info;
    std::vector<std::uint16_t> samples;
};

PngInfo read_png_info(const fs::path& path);
PngImage read_png(const fs::path& path);
void write_png(const fs::path& path, const PngInfo& info, std::span<const std::uint16_t> samples);

/// 8-bit image of any channel count on an ERP grid.
ErpImage<std::uint8_t> read_png8(const fs::path& path);
void write_png8(const fs::path& path, const ErpImage<std::uint8_t>& img);

/// Writes the three channels and, when mask_path is set, the mask as 0/255.
void write_encoded(const fs::path& path, const EncodedImage& img, const std::optional<fs::path>& mask_path);

// ---------------------------------------------------------------------------
// Depth

struct DepthFormat {
    double scale = 1.0 / 512.0;       ///< meters per raw unit
    std::uint16_t sentinel = 65535;   ///< raw value marking missing depth
};

/// 16-bit single-channel PNG; meters = raw * scale. The sentinel and raw 0 are invalid.
DepthImage load_depth(const fs::path& path, const DepthFormat& format = {});

/// Inverse of load_depth. Depths that do not fit below the sentinel are stored as invalid.
void save_depth(const fs::path& path, const DepthImage& depth, const DepthFormat& format = {});

// ---------------------------------------------------------------------------
// Dataset manifest (JSON lines)

struct ManifestEntry {
    std::optional<fs::path> rgb;
    std::optional<fs::path> depth;
    fs::path label;
    std::string fold;
    /// Optional per-rotation prediction label images, in SGA grid order.
    std::vector<fs::path> predictions;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    DepthFormat depth_format;
};

/// One JSON object per line with keys "label" (required), "rgb", "depth",
/// "fold", "predictions". Relative paths resolve against the manifest's
/// directory. Every referenced file must exist and all modalities of an
/// entry must share one size.
DatasetManifest load_manifest(const fs::path& path, const DepthFormat& format = {});

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    EgviaParams egvia;              ///< alpha 45 deg, lambda 0.5
    int region_rows = 3;            ///< m
    int region_cols = 7;            ///< n
    int region_size = 1080;
    int region_stride = 720;
    NormKind angle_norm = NormKind::angle;
    /// Fixed rectified-depth range; per-image min/max when unset.
    std::optional<NormRange> rectified_depth_range;
    bool estimate_gravity = false;
    int normal_window = 0;          ///< 0 = scaled default
    Sampling rgb_sampling = Sampling::bilinear;
    Sampling depth_sampling = Sampling::nearest;
    DepthFormat depth_format;
    int num_classes = 13;
    int ignore_index = 255;
    fs::path output_dir = ".";

    EncodeOptions encode_options() const;
};

/// Reads a JSON config; keys absent from the file keep their defaults.
RunConfig load_run_config(const fs::path& path);
/// Resolves `p` against the output directory; PANOREL_OUTPUT_DIR overrides config.output_dir.
fs::path resolve_output(const RunConfig& config, const fs::path& p);

} // namespace panorel
