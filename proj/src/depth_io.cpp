#include "panorel/io.hpp"

#include <cmath>

namespace panorel {

DepthImage load_depth(const fs::path& path, const DepthFormat& format)
{
    if (!(format.scale > 0.0)) {
        throw Error("invalid_argument", "depth scale must be positive");
    }
    const PngImage png = read_png(path);
    if (png.info.bit_depth != 16 || png.info.channels != 1) {
        throw Error("format", path.string() + " must be a 16-bit single-channel PNG");
    }
    DepthImage depth(GridSpec(png.info.width, png.info.height));
    for (int v = 0; v < png.info.height; ++v) {
        for (int u = 0; u < png.info.width; ++u) {
            const std::uint16_t raw = png.samples[static_cast<std::size_t>(v) * png.info.width + u];
            if (raw != format.sentinel && raw != 0) {
                depth.set(u, v, raw * format.scale);
            }
        }
    }
    return depth;
}

void save_depth(const fs::path& path, const DepthImage& depth, const DepthFormat& format)
{
    if (!(format.scale > 0.0)) {
        throw Error("invalid_argument", "depth scale must be positive");
    }
    std::vector<std::uint16_t> raw(depth.grid().pixel_count(), format.sentinel);
    for (int v = 0; v < depth.height(); ++v) {
        for (int u = 0; u < depth.width(); ++u) {
            if (!depth.valid(u, v)) {
                continue;
            }
            const double units = std::round(depth.at(u, v) / format.scale);
            if (units >= 1.0 && units < 65535.0 && units != format.sentinel) {
                raw[static_cast<std::size_t>(v) * depth.width() + u] = static_cast<std::uint16_t>(units);
            }
        }
    }
    write_png(path, {depth.width(), depth.height(), 1, 16}, raw);
}

} // namespace panorel
