#include "panorel/cli.hpp"

#include "panorel/io.hpp"
#include "panorel/rel.hpp"
#include "panorel/sga.hpp"
#include "panorel/smmf.hpp"
#include "panorel/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

namespace panorel {

namespace {

using nlohmann::json;

const std::map<std::string, Sampling> kSampling{{"nearest", Sampling::nearest}, {"bilinear", Sampling::bilinear}};
const std::map<std::string, NormKind> kAngleNorm{{"fixed", NormKind::angle}, {"minmax", NormKind::linear}};

bool given(const CLI::App* app, const std::string& name)
{
    const CLI::Option* opt = app->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

void ensure_parent(const fs::path& p)
{
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
}

void write_text(const fs::path& p, const std::string& text)
{
    ensure_parent(p);
    std::ofstream o(p);
    if (!o) {
        throw Error("io", "cannot write " + p.string());
    }
    o << text;
}

json nan_to_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

json stats_json(const SummaryStats& s)
{
    return {{"mean", s.mean}, {"variance", s.variance}, {"range", s.range}};
}

// Shared depth / config flags.
struct DepthFlags {
    std::string config;
    double scale = DepthFormat{}.scale;
    int sentinel = DepthFormat{}.sentinel;

    void add(CLI::App* app)
    {
        app->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
        app->add_option("--depth-scale", scale, "Meters per raw depth unit")->check(CLI::PositiveNumber);
        app->add_option("--sentinel", sentinel, "Raw value marking missing depth")->check(CLI::Range(0, 65535));
    }

    RunConfig load(const CLI::App* app) const
    {
        RunConfig cfg = config.empty() ? RunConfig{} : load_run_config(config);
        if (given(app, "--depth-scale")) {
            cfg.depth_format.scale = scale;
        }
        if (given(app, "--sentinel")) {
            cfg.depth_format.sentinel = static_cast<std::uint16_t>(sentinel);
        }
        return cfg;
    }
};

struct EncodeFlags {
    DepthFlags depth_flags;
    std::string depth;
    std::string out;
    std::string mask;
    double lambda = 0.5;
    double alpha = 45.0;
    int window = 0;
    bool gravity = false;
    std::string angle_norm = "fixed";

    void add(CLI::App* app, bool rel)
    {
        depth_flags.add(app);
        app->add_option("--depth", depth, "16-bit depth PNG")->required()->check(CLI::ExistingFile);
        app->add_option("--out", out, "Output 3-channel PNG")->required();
        app->add_option("--mask", mask, "Output validity mask PNG (default: <out>.mask.png)");
        if (rel) {
            app->add_option("--lambda", lambda, "EGVIA angle weight")->check(CLI::Range(0.0, 1.0));
            app->add_option("--alpha", alpha, "EGVIA blend threshold, degrees")->check(CLI::Range(0.0, 90.0));
        }
        app->add_option("--window", window, "Normal fitting window (odd, 0 = scaled default)");
        app->add_flag("--gravity", gravity, "Estimate and correct the gravity direction");
        app->add_option("--angle-norm", angle_norm, "Angle channel normalization")
            ->check(CLI::IsMember({"fixed", "minmax"}));
    }

    EncodeOptions options(const CLI::App* app) const
    {
        RunConfig cfg = depth_flags.load(app);
        if (given(app, "--lambda")) {
            cfg.egvia.lambda = lambda;
        }
        if (given(app, "--alpha")) {
            cfg.egvia.alpha_deg = alpha;
        }
        if (given(app, "--window")) {
            cfg.normal_window = window;
        }
        if (gravity) {
            cfg.estimate_gravity = true;
        }
        if (given(app, "--angle-norm")) {
            cfg.angle_norm = kAngleNorm.at(angle_norm);
        }
        return cfg.encode_options();
    }

    fs::path mask_path(const RunConfig& cfg) const
    {
        if (!mask.empty()) {
            return resolve_output(cfg, mask);
        }
        fs::path p = resolve_output(cfg, out);
        return p.replace_extension(".mask.png");
    }
};

void write_encoded_outputs(const EncodeFlags& f, const CLI::App* app, const EncodedImage& img, std::ostream& out)
{
    const RunConfig cfg = f.depth_flags.load(app);
    const fs::path out_path = resolve_output(cfg, f.out);
    const fs::path mask_path = f.mask_path(cfg);
    ensure_parent(out_path);
    ensure_parent(mask_path);
    write_encoded(out_path, img, mask_path);
    std::size_t valid = 0;
    for (auto m : img.mask().data()) {
        valid += m != 0;
    }
    out << json{{"output", out_path.string()}, {"mask", mask_path.string()}, {"valid_pixels", valid}}.dump()
        << "\n";
}

// ---------------------------------------------------------------------------

struct RotateFlags {
    DepthFlags depth_flags;
    std::string in;
    std::string out;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::string sampling = "bilinear";
    std::string kind = "rgb";

    void add(CLI::App* app)
    {
        depth_flags.add(app);
        app->add_option("--in", in, "Input PNG")->required()->check(CLI::ExistingFile);
        app->add_option("--out", out, "Output PNG")->required();
        app->add_option("--alpha", alpha, "Yaw, degrees");
        app->add_option("--beta", beta, "Pitch, degrees");
        app->add_option("--gamma", gamma, "Roll, degrees");
        app->add_option("--sampling", sampling, "nearest or bilinear (labels default to nearest)")->check(CLI::IsMember({"nearest", "bilinear"}));
        app->add_option("--kind", kind, "Image content")->check(CLI::IsMember({"rgb", "depth", "label"}));
    }

    void run(const CLI::App* app, std::ostream& os) const
    {
        const RunConfig cfg = depth_flags.load(app);
        const Rotation rot = RotationSpec{alpha, beta, gamma}.rotation();
        const Sampling s = kind == "label" && !given(app, "--sampling") ? Sampling::nearest : kSampling.at(sampling);
        const fs::path dst = resolve_output(cfg, out);
        ensure_parent(dst);
        if (kind == "depth") {
            save_depth(dst, rotate_depth(load_depth(in, cfg.depth_format), rot, s), cfg.depth_format);
        } else {
            const auto img = read_png8(in);
            write_png8(dst, rotate_erp(img, rot, s, kind == "label" ? Content::labels : Content::continuous));
        }
        os << json{{"output", dst.string()}, {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}}.dump() << "\n";
    }
};

// ---------------------------------------------------------------------------

struct SgaFlags {
    DepthFlags depth_flags;
    std::string manifest;
    std::string report;
    std::string csv;
    int num_classes = 13;
    int ignore_index = 255;
    std::string predictor = "files";
    int constant_class = 0;
    bool all_classes = false;

    void add(CLI::App* app)
    {
        depth_flags.add(app);
        app->add_option("--manifest", manifest, "JSON-lines dataset manifest")->required()->check(CLI::ExistingFile);
        app->add_option("--report", report, "Output JSON report")->required();
        app->add_option("--csv", csv, "Output CSV table");
        app->add_option("--num-classes", num_classes, "Number of semantic classes")->check(CLI::Range(1, 255));
        app->add_option("--ignore-index", ignore_index, "Label excluded from evaluation")->check(CLI::Range(0, 255));
        app->add_option("--predictor", predictor, "files: per-rotation predictions from the manifest; "
                                                  "gt: rotated ground truth; constant: one class everywhere")
            ->check(CLI::IsMember({"files", "gt", "constant"}));
        app->add_option("--constant-class", constant_class, "Class used by the constant predictor");
        app->add_flag("--all-classes", all_classes, "Average IoU over all classes");
    }

    void run(const CLI::App* app, std::ostream& os) const
    {
        const RunConfig cfg = depth_flags.load(app);
        const DatasetManifest m = load_manifest(manifest, cfg.depth_format);
        const std::vector<RotationSpec> grid = standard_sga_grid();

        SgaOptions opts;
        opts.eval.num_classes = given(app, "--num-classes") ? num_classes : cfg.num_classes;
        opts.eval.ignore_index = given(app, "--ignore-index") ? ignore_index : cfg.ignore_index;
        opts.eval.classes = all_classes ? ClassSet::all : ClassSet::present;
        opts.rgb_sampling = cfg.rgb_sampling;
        opts.depth_sampling = cfg.depth_sampling;

        const auto c = static_cast<std::size_t>(opts.eval.num_classes);
        std::vector<std::vector<std::uint64_t>> confusion(grid.size(), std::vector<std::uint64_t>(c * c, 0));
        for (const auto& entry : m.entries) {
            if (predictor == "files" && entry.predictions.size() != grid.size()) {
                throw Error("format", "entry " + entry.label.string() + " needs " + std::to_string(grid.size()) +
                                          " prediction paths for the files predictor");
            }
            SgaSample sample{std::nullopt, std::nullopt, read_png8(entry.label)};
            if (predictor != "files") {
                if (entry.rgb) {
                    sample.rgb = read_png8(*entry.rgb);
                }
                if (entry.depth) {
                    sample.depth = load_depth(*entry.depth, cfg.depth_format);
                }
            }
            const Predictor predict = [&](const SgaView& view) -> LabelImage {
                if (predictor == "gt") {
                    return view.gt;
                }
                if (predictor == "constant") {
                    return LabelImage(view.gt.grid(), 1, static_cast<std::uint8_t>(constant_class));
                }
                return read_png8(entry.predictions[view.rotation_index]);
            };
            const std::vector<SegEval> per = sga_run(std::span(&sample, 1), predict, grid, opts);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                for (std::size_t i = 0; i < c * c; ++i) {
                    confusion[k][i] += per[k].confusion[i];
                }
            }
        }

        std::vector<SegEval> results;
        for (auto& cm : confusion) {
            results.push_back(SegEval::from_confusion(opts.eval.num_classes, std::move(cm), opts.eval.classes));
        }
        const SgaStats stats = sga_stats(results);

        json rotations = json::array();
        std::string table = "beta,gamma,alpha,miou,pacc\n";
        for (std::size_t k = 0; k < grid.size(); ++k) {
            json per_class = json::array();
            for (double x : results[k].per_class_iou) {
                per_class.push_back(nan_to_null(x));
            }
            rotations.push_back({{"alpha", grid[k].alpha},
                                 {"beta", grid[k].beta},
                                 {"gamma", grid[k].gamma},
                                 {"miou", 100.0 * results[k].miou},
                                 {"pacc", 100.0 * results[k].pacc},
                                 {"per_class_iou", per_class}});
            std::ostringstream row;
            row << grid[k].beta << "," << grid[k].gamma << "," << grid[k].alpha << "," << 100.0 * results[k].miou
                << "," << 100.0 * results[k].pacc << "\n";
            table += row.str();
        }
        std::ostringstream summary;
        summary << "\nstatistic,miou,pacc\n"
                << "mean," << stats.miou.mean << "," << stats.pacc.mean << "\n"
                << "variance," << stats.miou.variance << "," << stats.pacc.variance << "\n"
                << "range," << stats.miou.range << "," << stats.pacc.range << "\n";
        table += summary.str();

        const json doc{{"units", "percent"},
                       {"samples", m.entries.size()},
                       {"num_classes", opts.eval.num_classes},
                       {"rotations", rotations},
                       {"stats", {{"miou", stats_json(stats.miou)}, {"pacc", stats_json(stats.pacc)}}}};
        const fs::path report_path = resolve_output(cfg, report);
        write_text(report_path, doc.dump(2) + "\n");
        if (!csv.empty()) {
            write_text(resolve_output(cfg, csv), table);
        }
        os << json{{"report", report_path.string()}, {"miou_mean", stats.miou.mean}, {"pacc_mean", stats.pacc.mean}}
                  .dump()
           << "\n";
    }
};

// ---------------------------------------------------------------------------

struct SliceFlags {
    DepthFlags depth_flags;
    int width = 4096;
    int height = 2048;
    int m = 3;
    int n = 7;
    int size = 1080;
    int stride = 720;
    int offset = 0;
    std::string json_out;
    std::string coverage_out;

    void add(CLI::App* app)
    {
        depth_flags.add(app);
        app->add_option("--width", width, "Canvas width");
        app->add_option("--height", height, "Canvas height");
        app->add_option("--m", m, "Region rows");
        app->add_option("--n", n, "Region columns");
        app->add_option("--size", size, "Region side, pixels");
        app->add_option("--stride", stride, "Region stride, pixels");
        app->add_option("--offset", offset, "First column start");
        app->add_option("--json", json_out, "Output region rectangles (JSON)");
        app->add_option("--coverage", coverage_out, "Output coverage map (8-bit PNG)");
    }

    void run(const CLI::App* app, std::ostream& os) const
    {
        const RunConfig cfg = depth_flags.load(app);
        const GridSpec grid(width, height);
        const auto pick = [&](const char* flag, int value, int fallback) {
            return given(app, flag) || depth_flags.config.empty() ? value : fallback;
        };
        const RegionGrid rg = slice_regions(grid, pick("--m", m, cfg.region_rows), pick("--n", n, cfg.region_cols),
                                            pick("--size", size, cfg.region_size),
                                            pick("--stride", stride, cfg.region_stride), offset);
        std::vector<RegionOutput> ones;
        for (const auto& r : rg.regions) {
            ones.push_back({r, FeatureMap(r.size, r.size, 1, 1.0)});
        }
        const Recombined rec = recombine(rg, ones);
        const auto cov = rec.coverage.data();
        const double max_cov = *std::max_element(cov.begin(), cov.end());
        const double min_cov = *std::min_element(cov.begin(), cov.end());

        json regions = json::array();
        for (const auto& r : rg.regions) {
            const int end = r.u_start + r.size;
            json spans = json::array();
            if (end <= width) {
                spans.push_back({r.u_start, end});
            } else {
                spans.push_back({r.u_start, width});
                spans.push_back({0, end - width});
            }
            regions.push_back({{"row", r.row},
                               {"col", r.col},
                               {"u_start", r.u_start},
                               {"v_start", r.v_start},
                               {"size", r.size},
                               {"wraps", end > width},
                               {"u_spans", spans},
                               {"v_span", {r.v_start, r.v_start + r.size}}});
        }
        const json doc{{"canvas", {{"width", width}, {"height", height}}},
                       {"m", rg.m},
                       {"n", rg.n},
                       {"region_size", rg.region_size},
                       {"stride", rg.stride},
                       {"regions", regions},
                       {"coverage", {{"min", min_cov}, {"max", max_cov}}}};
        if (!json_out.empty()) {
            write_text(resolve_output(cfg, json_out), doc.dump(2) + "\n");
        } else {
            os << doc.dump(2) << "\n";
        }
        if (!coverage_out.empty()) {
            // Gray level = round(255 * count / max count).
            ErpImage<std::uint8_t> png(grid, 1, 0);
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    png.at(x, y) = quantize(255.0 * rec.coverage.at(x, y) / max_cov);
                }
            }
            const fs::path p = resolve_output(cfg, coverage_out);
            ensure_parent(p);
            write_png8(p, png);
        }
    }
};

// ---------------------------------------------------------------------------

struct GateFlags {
    std::string records;
    std::string csv;

    void add(CLI::App* app)
    {
        app->add_option("--records", records, "JSON-lines gate records {row, col, g}")
            ->required()
            ->check(CLI::ExistingFile);
        app->add_option("--csv", csv, "Output CSV (stdout when omitted)");
    }

    void run(std::ostream& os) const
    {
        std::ifstream in(records);
        std::vector<GateRecord> recs;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            try {
                const json j = json::parse(line);
                recs.push_back({j.at("row").get<int>(), j.at("col").get<int>(),
                                j.at("g").get<std::vector<std::uint8_t>>()});
            } catch (const json::exception& e) {
                throw Error("format", "gate record line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        const GateUsageTable t = gate_usage_report(recs);
        std::ostringstream table;
        table << "row,col,count";
        for (std::size_t k = 0; k <= t.cells; ++k) {
            table << "," << static_cast<char>('a' + k);
        }
        table << "\n";
        for (const auto& [key, pct] : t.percent) {
            table << key.first << "," << key.second << "," << t.totals.at(key);
            for (double p : pct) {
                table << "," << p;
            }
            table << "\n";
        }
        if (csv.empty()) {
            os << table.str();
        } else {
            write_text(resolve_output(RunConfig{}, csv), table.str());
        }
    }
};

// ---------------------------------------------------------------------------

struct ProfileFlags {
    EncodeFlags enc;
    std::string hha;
    std::string mask;
    std::string out;

    void add(CLI::App* app)
    {
        enc.depth_flags.add(app);
        app->add_option("--hha", hha, "HHA PNG (height in channel 1, angle in channel 2)")->check(CLI::ExistingFile);
        app->add_option("--mask", mask, "Validity mask for --hha")->check(CLI::ExistingFile);
        app->add_option("--depth", enc.depth, "16-bit depth PNG, encoded to HHA first")->check(CLI::ExistingFile);
        app->add_option("--out", out, "Output JSON (stdout when omitted)");
    }

    void run(const CLI::App* app, std::ostream& os) const
    {
        if (hha.empty() == enc.depth.empty()) {
            throw Error("invalid_argument", "exactly one of --hha or --depth is required");
        }
        const RunConfig cfg = enc.depth_flags.load(app);
        HaProfile prof;
        if (!hha.empty()) {
            const auto img = read_png8(hha);
            if (img.channels() < 3) {
                throw Error("format", "HHA image needs three channels");
            }
            Mask valid(img.grid(), 1, 1);
            if (!mask.empty()) {
                valid = read_png8(mask);
            }
            ErpImage<std::uint8_t> h(img.grid(), 1, 0);
            ErpImage<std::uint8_t> a(img.grid(), 1, 0);
            for (int v = 0; v < img.height(); ++v) {
                for (int u = 0; u < img.width(); ++u) {
                    h.at(u, v) = img.at(u, v, HhaImage::kHeight);
                    a.at(u, v) = img.at(u, v, HhaImage::kAngle);
                }
            }
            prof = ha_profile(h, a, valid);
        } else {
            prof = ha_profile(encode_hha(load_depth(enc.depth, cfg.depth_format), cfg.encode_options()));
        }
        const json doc{{"phi", prof.phi_deg},
                       {"height_mean", prof.height_mean},
                       {"angle_mean", prof.angle_mean},
                       {"correlation", nan_to_null(prof.correlation)}};
        if (out.empty()) {
            os << doc.dump() << "\n";
        } else {
            write_text(resolve_output(cfg, out), doc.dump(2) + "\n");
        }
    }
};

// ---------------------------------------------------------------------------

struct SynthFlags {
    DepthFlags depth_flags;
    std::string kind = "box_room";
    int height = 512;
    std::string depth_out;
    std::string labels_out;
    std::string normals_out;
    std::string rgb_out;
    bool furnished = false;
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;

    void add(CLI::App* app)
    {
        depth_flags.add(app);
        app->add_option("--kind", kind, "Scene")->check(CLI::IsMember({"box_room", "cylinder_wall", "floor_plane"}));
        app->add_option("--height", height, "Panorama height (width = 2 * height)")->check(CLI::PositiveNumber);
        app->add_option("--depth-out", depth_out, "Output 16-bit depth PNG")->required();
        app->add_option("--labels-out", labels_out, "Output label PNG");
        app->add_option("--normals-out", normals_out, "Output normal visualization PNG, (n + 1) / 2 * 255");
        app->add_option("--rgb-out", rgb_out, "Output label-colored RGB PNG");
        app->add_flag("--furnished", furnished, "Add furniture to the box room");
        app->add_option("--yaw", yaw, "Camera yaw, degrees");
        app->add_option("--pitch", pitch, "Camera pitch, degrees");
        app->add_option("--roll", roll, "Camera roll, degrees");
    }

    void run(const CLI::App* app, std::ostream& os) const
    {
        const RunConfig cfg = depth_flags.load(app);
        SceneDims dims;
        dims.furnished = furnished;
        dims.camera = RotationSpec{yaw, pitch, roll}.rotation();
        dims.max_depth = 65534.0 * cfg.depth_format.scale;
        const GridSpec grid = GridSpec::from_height(height);
        const SyntheticScene s = synth_scene(parse_scene_kind(kind), dims, grid);

        const fs::path dp = resolve_output(cfg, depth_out);
        ensure_parent(dp);
        save_depth(dp, s.depth, cfg.depth_format);
        if (!labels_out.empty()) {
            const fs::path p = resolve_output(cfg, labels_out);
            ensure_parent(p);
            write_png8(p, s.labels);
        }
        if (!normals_out.empty()) {
            ErpImage<std::uint8_t> vis(grid, 3, 0);
            for (int v = 0; v < grid.height(); ++v) {
                for (int u = 0; u < grid.width(); ++u) {
                    if (s.normals.valid(u, v)) {
                        for (int c = 0; c < 3; ++c) {
                            vis.at(u, v, c) = quantize((s.normals.at(u, v)[c] + 1.0) * 0.5 * 255.0);
                        }
                    }
                }
            }
            const fs::path p = resolve_output(cfg, normals_out);
            ensure_parent(p);
            write_png8(p, vis);
        }
        if (!rgb_out.empty()) {
            static constexpr std::uint8_t kPalette[5][3] = {
                {128, 96, 64}, {230, 230, 230}, {180, 160, 140}, {60, 90, 160}, {0, 0, 0}};
            ErpImage<std::uint8_t> rgb(grid, 3, 0);
            for (int v = 0; v < grid.height(); ++v) {
                for (int u = 0; u < grid.width(); ++u) {
                    const int l = std::min<int>(s.labels.at(u, v), 4);
                    for (int c = 0; c < 3; ++c) {
                        rgb.at(u, v, c) = kPalette[l][c];
                    }
                }
            }
            const fs::path p = resolve_output(cfg, rgb_out);
            ensure_parent(p);
            write_png8(p, rgb);
        }
        os << json{{"depth", dp.string()}, {"valid_pixels", s.depth.valid_count()}}.dump() << "\n";
    }
};

void write_error(std::ostream& err, const std::string& code, const std::string& message)
{
    err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"panorel: panoramic depth encodings, rotation validation and region routing"};
    app.require_subcommand(1);

    EncodeFlags rel_flags;
    auto* rel_cmd = app.add_subcommand("encode-rel", "Encode a depth panorama as ReD / EGVIA / LOA");
    rel_flags.add(rel_cmd, true);

    EncodeFlags hha_flags;
    auto* hha_cmd = app.add_subcommand("encode-hha", "Encode a depth panorama as HHA");
    hha_flags.add(hha_cmd, false);

    RotateFlags rotate_flags;
    auto* rotate_cmd = app.add_subcommand("rotate", "Rotate a panorama by yaw / pitch / roll");
    rotate_flags.add(rotate_cmd);

    SgaFlags sga_flags;
    auto* sga_cmd = app.add_subcommand("sga-eval", "Evaluate segmentation over the 16 rotation disturbances");
    sga_flags.add(sga_cmd);

    SliceFlags slice_flags;
    auto* slice_cmd = app.add_subcommand("slice-debug", "Emit region rectangles and a coverage map");
    slice_flags.add(slice_cmd);

    GateFlags gate_flags;
    auto* gate_cmd = app.add_subcommand("gate-report", "Per-region fusion pattern frequencies");
    gate_flags.add(gate_cmd);

    ProfileFlags profile_flags;
    auto* profile_cmd = app.add_subcommand("ha-profile", "Per-latitude height / angle curves and correlation");
    profile_flags.add(profile_cmd);

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic depth panorama");
    synth_flags.add(synth_cmd);

    std::vector<const char*> argv{"panorel"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*rel_cmd) {
            const EncodeOptions opts = rel_flags.options(rel_cmd);
            const RunConfig cfg = rel_flags.depth_flags.load(rel_cmd);
            write_encoded_outputs(rel_flags, rel_cmd, encode_rel(load_depth(rel_flags.depth, cfg.depth_format), opts),
                                  out);
        } else if (*hha_cmd) {
            const EncodeOptions opts = hha_flags.options(hha_cmd);
            const RunConfig cfg = hha_flags.depth_flags.load(hha_cmd);
            write_encoded_outputs(hha_flags, hha_cmd, encode_hha(load_depth(hha_flags.depth, cfg.depth_format), opts),
                                  out);
        } else if (*rotate_cmd) {
            rotate_flags.run(rotate_cmd, out);
        } else if (*sga_cmd) {
            sga_flags.run(sga_cmd, out);
        } else if (*slice_cmd) {
            slice_flags.run(slice_cmd, out);
        } else if (*gate_cmd) {
            gate_flags.run(out);
        } else if (*profile_cmd) {
            profile_flags.run(profile_cmd, out);
        } else if (*synth_cmd) {
            synth_flags.run(synth_cmd, out);
        }
    } catch (const Error& e) {
        write_error(err, e.code(), e.what());
        return 1;
    } catch (const fs::filesystem_error& e) {
        write_error(err, "io", e.what());
        return 1;
    } catch (const std::exception& e) {
        write_error(err, "internal", e.what());
        return 1;
    }
    return 0;
}

} // namespace panorel
