#include "panorel/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace panorel {

EncodeOptions RunConfig::encode_options() const
{
    EncodeOptions o;
    o.egvia = egvia;
    o.normals.window = normal_window;
    o.normals.noise_floor = depth_format.scale;
    o.estimate_gravity = estimate_gravity;
    o.angle_norm = angle_norm;
    o.rectified_depth_range = rectified_depth_range;
    return o;
}

namespace {

Sampling parse_sampling(const std::string& s)
{
    if (s == "nearest") {
        return Sampling::nearest;
    }
    if (s == "bilinear") {
        return Sampling::bilinear;
    }
    throw Error("invalid_argument", "unknown sampling mode " + s);
}

} // namespace

RunConfig load_run_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("io", "cannot open config " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error("format", "config " + path.string() + ": " + e.what());
    }
    RunConfig c;
    try {
        c.egvia.alpha_deg = j.value("alpha", c.egvia.alpha_deg);
        c.egvia.lambda = j.value("lambda", c.egvia.lambda);
        c.region_rows = j.value("m", c.region_rows);
        c.region_cols = j.value("n", c.region_cols);
        c.region_size = j.value("region_size", c.region_size);
        c.region_stride = j.value("region_stride", c.region_stride);
        if (j.contains("angle_norm")) {
            const auto s = j["angle_norm"].get<std::string>();
            if (s != "fixed" && s != "minmax") {
                throw Error("invalid_argument", "angle_norm must be fixed or minmax");
            }
            c.angle_norm = s == "fixed" ? NormKind::angle : NormKind::linear;
        }
        if (j.contains("rectified_depth_range")) {
            const auto r = j["rectified_depth_range"].get<std::vector<double>>();
            if (r.size() != 2 || !(r[1] > r[0])) {
                throw Error("invalid_argument", "rectified_depth_range must be [min, max] with max > min");
            }
            c.rectified_depth_range = NormRange{r[0], r[1]};
        }
        c.estimate_gravity = j.value("estimate_gravity", c.estimate_gravity);
        c.normal_window = j.value("normal_window", c.normal_window);
        if (j.contains("rgb_sampling")) {
            c.rgb_sampling = parse_sampling(j["rgb_sampling"].get<std::string>());
        }
        if (j.contains("depth_sampling")) {
            c.depth_sampling = parse_sampling(j["depth_sampling"].get<std::string>());
        }
        c.depth_format.scale = j.value("depth_scale", c.depth_format.scale);
        c.depth_format.sentinel = j.value("depth_sentinel", c.depth_format.sentinel);
        c.num_classes = j.value("num_classes", c.num_classes);
        c.ignore_index = j.value("ignore_index", c.ignore_index);
        c.output_dir = j.value("output_dir", c.output_dir.string());
    } catch (const nlohmann::json::exception& e) {
        throw Error("format", "config " + path.string() + ": " + e.what());
    }
    c.egvia.validate();
    return c;
}

fs::path resolve_output(const RunConfig& config, const fs::path& p)
{
    if (p.is_absolute()) {
        return p;
    }
    if (const char* env = std::getenv("PANOREL_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        return fs::path(env) / p;
    }
    return config.output_dir / p;
}

} // namespace panorel
