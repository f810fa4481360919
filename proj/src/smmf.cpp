#include "panorel/smmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace panorel {

FeatureMap::FeatureMap(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels)
{
    if (width < 1 || height < 1 || channels < 1) {
        throw Error("invalid_argument", "feature map dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

// ---------------------------------------------------------------------------

bool RegionGrid::contains(const Region& r) const
{
    return std::find(regions.begin(), regions.end(), r) != regions.end();
}

RegionGrid slice_regions(int canvas_width, int canvas_height, int m, int n, int region_size, int stride,
                         int column_offset)
{
    if (m < 1 || n < 1) {
        throw Error("invalid_argument", "region grid needs at least one row and one column");
    }
    if (stride <= 0) {
        throw Error("invalid_argument", "region stride must be positive");
    }
    if (region_size < 1 || region_size > canvas_height || region_size > canvas_width) {
        throw Error("invalid_argument", "region size must fit inside the image height");
    }

    const int free_rows = canvas_height - region_size;
    const int center = free_rows / 2;
    const auto upper = [&](int k) {
        // k-th row above the equator; for even m the first pair straddles it.
        const long long offset = m % 2 == 1 ? static_cast<long long>(k) * stride
                                            : (static_cast<long long>(2 * k - 1) * stride) / 2;
        return static_cast<int>(std::max<long long>(0, center - offset));
    };

    std::vector<int> row_starts;
    const int pairs = m / 2;
    for (int k = pairs; k >= 1; --k) {
        row_starts.push_back(upper(k));
    }
    if (m % 2 == 1) {
        row_starts.push_back(center);
    }
    for (int k = 1; k <= pairs; ++k) {
        row_starts.push_back(free_rows - upper(k));
    }

    RegionGrid grid{canvas_width, canvas_height, m, n, region_size, stride, {}};
    grid.regions.reserve(static_cast<std::size_t>(m) * n);
    for (int row = 0; row < m; ++row) {
        for (int col = 0; col < n; ++col) {
            const long long u = (static_cast<long long>(column_offset) + static_cast<long long>(col) * stride) %
                                canvas_width;
            grid.regions.push_back(
                {row, col, static_cast<int>(u < 0 ? u + canvas_width : u), row_starts[row], region_size});
        }
    }
    return grid;
}

RegionGrid slice_regions(const GridSpec& grid, int m, int n, int region_size, int stride, int column_offset)
{
    return slice_regions(grid.width(), grid.height(), m, n, region_size, stride, column_offset);
}

FeatureMap extract_region(const FeatureMap& canvas, const Region& region)
{
    if (region.v_start < 0 || region.v_start + region.size > canvas.height() || region.size > canvas.width()) {
        throw Error("out_of_range", "region does not fit the canvas");
    }
    FeatureMap out(region.size, region.size, canvas.channels());
    for (int y = 0; y < region.size; ++y) {
        for (int x = 0; x < region.size; ++x) {
            const int cu = (region.u_start + x) % canvas.width();
            for (int c = 0; c < canvas.channels(); ++c) {
                out.at(x, y, c) = canvas.at(cu, region.v_start + y, c);
            }
        }
    }
    return out;
}

Recombined recombine(const RegionGrid& grid, std::span<const RegionOutput> outputs, bool normalize_by_coverage)
{
    if (outputs.empty()) {
        throw Error("invalid_argument", "nothing to recombine");
    }
    const int channels = outputs.front().map.channels();
    Recombined out{FeatureMap(grid.canvas_width, grid.canvas_height, channels),
                   FeatureMap(grid.canvas_width, grid.canvas_height, 1)};
    for (const auto& ro : outputs) {
        const Region& r = ro.region;
        if (!grid.contains(r)) {
            throw Error("shape_mismatch", "region does not belong to this region grid");
        }
        if (ro.map.width() != r.size || ro.map.height() != r.size || ro.map.channels() != channels) {
            throw Error("shape_mismatch", "region output does not match the region size");
        }
        for (int y = 0; y < r.size; ++y) {
            const int cv = r.v_start + y;
            for (int x = 0; x < r.size; ++x) {
                const int cu = (r.u_start + x) % grid.canvas_width;
                for (int c = 0; c < channels; ++c) {
                    out.sum.at(cu, cv, c) += ro.map.at(x, y, c);
                }
                out.coverage.at(cu, cv) += 1.0;
            }
        }
    }
    if (normalize_by_coverage) {
        for (int y = 0; y < grid.canvas_height; ++y) {
            for (int x = 0; x < grid.canvas_width; ++x) {
                const double k = out.coverage.at(x, y);
                if (k > 0.0) {
                    for (int c = 0; c < channels; ++c) {
                        out.sum.at(x, y, c) /= k;
                    }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p))
{
    if (p_.empty()) {
        throw Error("invalid_argument", "probability vector is empty");
    }
    double sum = 0.0;
    for (double x : p_) {
        if (!std::isfinite(x) || x < 0.0) {
            throw Error("invalid_argument", "probabilities must be finite and nonnegative");
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error("invalid_argument", "probabilities must sum to 1");
    }
}

bool ProbVector::is_one_hot() const noexcept
{
    return std::count(p_.begin(), p_.end(), 1.0) == 1 &&
           std::count(p_.begin(), p_.end(), 0.0) == static_cast<std::ptrdiff_t>(p_.size() - 1);
}

namespace {

void check_logits(std::span<const double> logits)
{
    if (logits.empty()) {
        throw Error("invalid_argument", "gate needs at least one logit");
    }
    for (double x : logits) {
        if (!std::isfinite(x)) {
            throw Error("invalid_argument", "gate logits must be finite");
        }
    }
}

ProbVector softmax(std::span<const double> z)
{
    const double top = *std::max_element(z.begin(), z.end());
    std::vector<double> e(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        e[i] = std::exp(z[i] - top);
        sum += e[i];
    }
    for (double& x : e) {
        x /= sum;
    }
    return ProbVector(std::move(e));
}

} // namespace

ProbVector gate_soft(std::span<const double> logits, double temperature)
{
    check_logits(logits);
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error("invalid_argument", "temperature must be positive");
    }
    std::vector<double> z(logits.begin(), logits.end());
    for (double& x : z) {
        x /= temperature;
    }
    return softmax(z);
}

ProbVector gate_soft_gumbel(std::span<const double> logits, double temperature, std::mt19937_64& rng)
{
    check_logits(logits);
    std::uniform_real_distribution<double> unif(std::numeric_limits<double>::min(), 1.0);
    std::vector<double> noisy(logits.begin(), logits.end());
    for (double& x : noisy) {
        x += -std::log(-std::log(unif(rng)));
    }
    return gate_soft(noisy, temperature);
}

ProbVector gate_hard(std::span<const double> logits)
{
    check_logits(logits);
    std::size_t best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i) {
        if (logits[i] > logits[best]) {
            best = i;
        }
    }
    std::vector<double> p(logits.size(), 0.0);
    p[best] = 1.0;
    return ProbVector(std::move(p));
}

double temperature_schedule(int epoch, int total_soft_epochs)
{
    if (total_soft_epochs < 1 || epoch < 0 || epoch >= total_soft_epochs) {
        throw Error("out_of_range", "epoch outside the soft training stage");
    }
    if (total_soft_epochs == 1) {
        return 1.0;
    }
    return std::pow(0.1, static_cast<double>(epoch) / static_cast<double>(total_soft_epochs - 1));
}

GatePattern::GatePattern(std::vector<std::uint8_t> decisions) : g_(std::move(decisions))
{
    if (g_.empty()) {
        throw Error("invalid_pattern", "gate pattern is empty");
    }
    for (std::size_t i = 0; i < g_.size(); ++i) {
        if (g_[i] > 1 || (i > 0 && g_[i] > g_[i - 1])) {
            throw Error("invalid_pattern", "gate pattern must be 0/1 and non-increasing");
        }
    }
}

std::size_t GatePattern::fused_cells() const noexcept
{
    return static_cast<std::size_t>(std::count(g_.begin(), g_.end(), std::uint8_t{1}));
}

GatePattern apply_early_stop(std::span<const std::uint8_t> raw)
{
    std::vector<std::uint8_t> out(raw.size(), 0);
    bool on = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        on = on && raw[i] != 0;
        out[i] = on ? 1 : 0;
    }
    return GatePattern(std::move(out));
}

FeatureMap fuse_cell(const FeatureMap& rgb, const FeatureMap& depth, const ProbVector& prob,
                     std::span<const FusionOp> ops)
{
    if (ops.size() != prob.size()) {
        throw Error("shape_mismatch", "one fusion operation per probability entry is required");
    }
    if (rgb.width() != depth.width() || rgb.height() != depth.height()) {
        throw Error("shape_mismatch", "modalities must share a grid");
    }
    std::optional<FeatureMap> acc;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const double p = prob[i];
        if (p == 0.0) {
            continue;
        }
        FeatureMap y = ops[i](rgb, depth);
        if (p == 1.0) {
            return y;
        }
        if (!acc) {
            acc.emplace(y.width(), y.height(), y.channels());
        } else if (!acc->same_shape(y)) {
            throw Error("shape_mismatch", "fusion operations disagree on output shape");
        }
        auto dst = acc->data();
        const auto src = y.data();
        for (std::size_t k = 0; k < dst.size(); ++k) {
            dst[k] += p * src[k];
        }
    }
    return std::move(*acc);
}

// ---------------------------------------------------------------------------

GateUsageTable gate_usage_report(std::span<const GateRecord> records)
{
    if (records.empty()) {
        throw Error("invalid_argument", "gate usage report needs at least one record");
    }
    GateUsageTable table;
    table.cells = records.front().decisions.size();
    std::map<std::pair<int, int>, std::vector<std::size_t>> counts;
    for (const auto& rec : records) {
        if (rec.decisions.size() != table.cells) {
            throw Error("invalid_pattern", "gate records disagree on the number of fusion cells");
        }
        const GatePattern pattern(rec.decisions);
        auto& c = counts[{rec.row, rec.col}];
        c.resize(table.cells + 1, 0);
        ++c[pattern.fused_cells()];
    }
    for (const auto& [key, c] : counts) {
        const std::size_t total = std::accumulate(c.begin(), c.end(), std::size_t{0});
        std::vector<double> pct(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) {
            pct[k] = 100.0 * static_cast<double>(c[k]) / static_cast<double>(total);
        }
        table.percent[key] = std::move(pct);
        table.totals[key] = total;
    }
    return table;
}

} // namespace panorel
