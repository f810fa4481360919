#include "panorel/io.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace panorel {

namespace {

fs::path resolve(const fs::path& base, const std::string& p)
{
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

fs::path require_file(const fs::path& p, std::size_t line)
{
    if (!fs::is_regular_file(p)) {
        throw Error("missing_file", "manifest line " + std::to_string(line) + ": no such file " + p.string());
    }
    return p;
}

} // namespace

DatasetManifest load_manifest(const fs::path& path, const DepthFormat& format)
{
    if (!(format.scale > 0.0)) {
        throw Error("invalid_argument", "depth scale must be positive");
    }
    std::ifstream in(path);
    if (!in) {
        throw Error("io", "cannot open manifest " + path.string());
    }
    const fs::path base = path.parent_path();
    DatasetManifest manifest;
    manifest.depth_format = format;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("format", "manifest line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("label") || !j["label"].is_string()) {
            throw Error("format", "manifest line " + std::to_string(lineno) + ": \"label\" path is required");
        }
        ManifestEntry e;
        e.label = require_file(resolve(base, j["label"].get<std::string>()), lineno);
        if (j.contains("rgb")) {
            e.rgb = require_file(resolve(base, j["rgb"].get<std::string>()), lineno);
        }
        if (j.contains("depth")) {
            e.depth = require_file(resolve(base, j["depth"].get<std::string>()), lineno);
        }
        e.fold = j.value("fold", std::string{});
        if (j.contains("predictions")) {
            for (const auto& p : j["predictions"]) {
                e.predictions.push_back(require_file(resolve(base, p.get<std::string>()), lineno));
            }
        }

        const PngInfo ref = read_png_info(e.label);
        const auto check = [&](const fs::path& p) {
            const PngInfo info = read_png_info(p);
            if (info.width != ref.width || info.height != ref.height) {
                throw Error("shape_mismatch", "manifest line " + std::to_string(lineno) + ": " + p.string() +
                                                  " differs in size from " + e.label.string());
            }
        };
        if (e.rgb) {
            check(*e.rgb);
        }
        if (e.depth) {
            check(*e.depth);
        }
        for (const auto& p : e.predictions) {
            check(p);
        }
        manifest.entries.push_back(std::move(e));
    }
    if (manifest.entries.empty()) {
        throw Error("format", "manifest " + path.string() + " has no entries");
    }
    return manifest;
}

} // namespace panorel
