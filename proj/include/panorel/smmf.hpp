#pragma once

#include "panorel/coords.hpp"
#include "panorel/error.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace panorel {

// ---------------------------------------------------------------------------
// Feature maps

/// Dense multi-channel real array, interleaved row-major.
class FeatureMap {
public:
    FeatureMap(int width, int height, int channels, double fill = 0.0);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    bool same_shape(const FeatureMap& o) const noexcept
    {
        return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
    }

    double& at(int x, int y, int c = 0) noexcept { return data_[index(x, y, c)]; }
    double at(int x, int y, int c = 0) const noexcept { return data_[index(x, y, c)]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

private:
    std::size_t index(int x, int y, int c) const noexcept
    {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(channels_) +
               static_cast<std::size_t>(c);
    }

    int width_;
    int height_;
    int channels_;
    std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Region slicing

/// Square window on the canvas. u_start is taken modulo the canvas width, so a
/// region may continue past the right edge onto the left.
struct Region {
    int row = 0;
    int col = 0;
    int u_start = 0;
    int v_start = 0;
    int size = 0;

    friend bool operator==(const Region&, const Region&) = default;
};

struct RegionGrid {
    int canvas_width = 0;
    int canvas_height = 0;
    int m = 0; ///< rows
    int n = 0; ///< columns
    int region_size = 0;
    int stride = 0;
    std::vector<Region> regions; ///< row-major, top row first

    const Region& at(int row, int col) const { return regions.at(static_cast<std::size_t>(row) * n + col); }
    bool contains(const Region& r) const;
};

/// Rows grow outward from an equator-centered row in steps of `stride`, clamped
/// to stay inside the image and mirrored so the layout is symmetric about the
/// equator. Column starts are column_offset + k * stride modulo the width.
RegionGrid slice_regions(int canvas_width, int canvas_height, int m, int n, int region_size, int stride,
                         int column_offset = 0);
RegionGrid slice_regions(const GridSpec& grid, int m, int n, int region_size, int stride, int column_offset = 0);

/// Copies the (possibly wrapping) window of `canvas` covered by `region`.
FeatureMap extract_region(const FeatureMap& canvas, const Region& region);

struct RegionOutput {
    Region region;
    FeatureMap map;
};

struct Recombined {
    FeatureMap sum;
    FeatureMap coverage; ///< one channel, number of regions covering each pixel
};

/// Places every region output on the canvas and sums overlaps in the given
/// order. With normalize_by_coverage the sum is divided by the coverage count.
Recombined recombine(const RegionGrid& grid, std::span<const RegionOutput> outputs,
                     bool normalize_by_coverage = false);

// ---------------------------------------------------------------------------
// Gating

/// Point on the probability simplex (checked to 1e-9).
class ProbVector {
public:
    explicit ProbVector(std::vector<double> p);

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const noexcept { return p_[i]; }
    std::span<const double> values() const noexcept { return p_; }
    bool is_one_hot() const noexcept;

private:
    std::vector<double> p_;
};

/// softmax(logits / temperature). Throws on non-finite logits or temperature <= 0.
ProbVector gate_soft(std::span<const double> logits, double temperature);

/// Gumbel-softmax variant: standard Gumbel noise from `rng` is added to the logits.
ProbVector gate_soft_gumbel(std::span<const double> logits, double temperature, std::mt19937_64& rng);

/// One-hot at the argmax; ties go to the lower index.
ProbVector gate_hard(std::span<const double> logits);

/// Exponential decay from 1.0 at epoch 0 to 0.1 at the last soft epoch.
double temperature_schedule(int epoch, int total_soft_epochs);

/// Per-cell fusion decisions (0 = RGB only, 1 = RGB-D fusion), non-increasing.
class GatePattern {
public:
    /// Throws Error("invalid_pattern") unless the decisions are 0/1 and non-increasing.
    explicit GatePattern(std::vector<std::uint8_t> decisions);

    std::size_t size() const noexcept { return g_.size(); }
    std::span<const std::uint8_t> decisions() const noexcept { return g_; }
    /// Number of fused cells; identifies the pattern among the size() + 1 valid ones.
    std::size_t fused_cells() const noexcept;

    friend bool operator==(const GatePattern&, const GatePattern&) = default;

private:
    std::vector<std::uint8_t> g_;
};

/// Prefix conjunction: once a cell declines fusion, every later cell does too.
GatePattern apply_early_stop(std::span<const std::uint8_t> raw);

using FusionOp = std::function<FeatureMap(const FeatureMap& rgb, const FeatureMap& depth)>;

/// Probability-weighted sum of the fusion operations. Operations with zero
/// probability are not evaluated, so a one-hot vector returns the chosen output as is.
FeatureMap fuse_cell(const FeatureMap& rgb, const FeatureMap& depth, const ProbVector& prob,
                     std::span<const FusionOp> ops);

// ---------------------------------------------------------------------------
// Gate usage

struct GateRecord {
    int row = 0;
    int col = 0;
    std::vector<std::uint8_t> decisions;
};

/// Percentage of each valid pattern per region. Column k counts patterns with
/// k fused cells, so for four cells columns 0..4 are [0,0,0,0] .. [1,1,1,1].
struct GateUsageTable {
    std::size_t cells = 0;
    std::map<std::pair<int, int>, std::vector<double>> percent;
    std::map<std::pair<int, int>, std::size_t> totals;
};

/// Throws Error("invalid_pattern") on a non-monotone record or mixed cell counts.
GateUsageTable gate_usage_report(std::span<const GateRecord> records);

} // namespace panorel
