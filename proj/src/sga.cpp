#include "panorel/sga.hpp"

#include <algorithm>
#include <sstream>

namespace panorel {

std::vector<RotationSpec> standard_sga_grid()
{
    std::vector<RotationSpec> grid;
    for (double yaw : {0.0, 90.0, 180.0, 270.0}) {
        for (double pitch : {0.0, 5.0}) {
            for (double roll : {0.0, 5.0}) {
                grid.push_back({yaw, pitch, roll});
            }
        }
    }
    return grid;
}

namespace {

std::string describe(const RotationSpec& r)
{
    std::ostringstream os;
    os << "(yaw " << r.alpha << ", pitch " << r.beta << ", roll " << r.gamma << ")";
    return os.str();
}

} // namespace

SgaError::SgaError(const RotationSpec& rotation, const std::string& message)
    : Error("predictor_failed", "prediction failed at rotation " + describe(rotation) + ": " + message),
      rotation_(rotation)
{
}

std::vector<SegEval> sga_run(std::span<const SgaSample> samples, const Predictor& predict,
                             std::span<const RotationSpec> grid, const SgaOptions& options)
{
    if (!predict) {
        throw Error("invalid_argument", "no predictor supplied");
    }
    const auto c = static_cast<std::size_t>(options.eval.num_classes);
    std::vector<SegEval> results;
    results.reserve(grid.size());
    for (std::size_t ri = 0; ri < grid.size(); ++ri) {
        const RotationSpec& spec = grid[ri];
        const Rotation rot = spec.rotation();
        std::vector<std::uint64_t> confusion(c * c, 0);
        for (std::size_t si = 0; si < samples.size(); ++si) {
            const SgaSample& s = samples[si];
            const SamplingMap map(s.gt.grid(), rot);
            const LabelImage gt = rotate_erp(s.gt, map, Sampling::nearest, Content::labels);
            std::optional<RgbImage> rgb;
            std::optional<DepthImage> depth;
            if (s.rgb) {
                rgb = rotate_erp(*s.rgb, map, options.rgb_sampling);
            }
            if (s.depth) {
                depth = rotate_depth(*s.depth, map, options.depth_sampling);
            }
            const SgaView view{rgb ? &*rgb : nullptr, depth ? &*depth : nullptr, gt, spec, si, ri};
            LabelImage pred = [&] {
                try {
                    return predict(view);
                } catch (const std::exception& e) {
                    throw SgaError(spec, e.what());
                }
            }();
            accumulate_confusion(pred, gt, options.eval, confusion);
        }
        results.push_back(SegEval::from_confusion(options.eval.num_classes, std::move(confusion),
                                                  options.eval.classes));
    }
    return results;
}

SummaryStats summarize(std::span<const double> values)
{
    if (values.size() < 2) {
        throw Error("too_few_results", "statistics need at least two results");
    }
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double x : values) {
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (double x : values) {
        ss += (x - mean) * (x - mean);
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {mean, ss / (n - 1.0), *hi - *lo};
}

SgaStats sga_stats(std::span<const SegEval> results)
{
    std::vector<double> miou;
    std::vector<double> pacc;
    for (const auto& r : results) {
        miou.push_back(100.0 * r.miou);
        pacc.push_back(100.0 * r.pacc);
    }
    return {summarize(miou), summarize(pacc)};
}

} // namespace panorel
