#pragma once

#include "panorel/image.hpp"
#include "panorel/rotation.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace panorel {

// ---------------------------------------------------------------------------
// Rotating ERP images

enum class Sampling { nearest, bilinear };

/// Whether pixel values may be blended. Label images only allow nearest sampling.
enum class Content { continuous, labels };

/// Source pixel coordinates (continuous, pixel-center convention) for every
/// output pixel of a rotated panorama. Reusable across images on the same grid.
class SamplingMap {
public:
    SamplingMap(const GridSpec& grid, const Rotation& rotation);

    const GridSpec& grid() const noexcept { return grid_; }
    double src_u(int u, int v) const noexcept { return src_u_[index(u, v)]; }
    double src_v(int u, int v) const noexcept { return src_v_[index(u, v)]; }

private:
    std::size_t index(int u, int v) const noexcept
    {
        return static_cast<std::size_t>(v) * static_cast<std::size_t>(grid_.width()) + static_cast<std::size_t>(u);
    }

    GridSpec grid_;
    std::vector<double> src_u_;
    std::vector<double> src_v_;
};

/// Output pixel (u, v) samples the input along R^T * dir(u, v): the scene is
/// rotated by R relative to the camera. Horizontal sampling wraps; vertical clamps.
/// Integer types are rounded half away from zero after bilinear blending.
template <typename T>
ErpImage<T> rotate_erp(const ErpImage<T>& img, const Rotation& rotation, Sampling sampling,
                       Content content = Content::continuous);

template <typename T>
ErpImage<T> rotate_erp(const ErpImage<T>& img, const SamplingMap& map, Sampling sampling,
                       Content content = Content::continuous);

/// Depth values are carried per ray (radial distance does not change under a
/// rotation about the camera). Bilinear sampling blends only valid neighbors.
DepthImage rotate_depth(const DepthImage& depth, const Rotation& rotation, Sampling sampling);
DepthImage rotate_depth(const DepthImage& depth, const SamplingMap& map, Sampling sampling);

inline LabelImage rotate_labels(const LabelImage& labels, const Rotation& rotation)
{
    return rotate_erp(labels, rotation, Sampling::nearest, Content::labels);
}

// ---------------------------------------------------------------------------
// Segmentation metrics

enum class ClassSet {
    present, ///< mean IoU over classes occurring in ground truth or prediction
    all,     ///< mean over every class; classes with an empty union count as 0
};

struct SegEvalOptions {
    int num_classes = 13;
    int ignore_index = 255;
    ClassSet classes = ClassSet::present;
};

struct SegEval {
    int num_classes = 0;
    /// Row-major counts, rows = ground truth class, columns = predicted class.
    std::vector<std::uint64_t> confusion;
    double miou = 0.0;
    double pacc = 0.0;
    /// NaN for classes absent from both ground truth and prediction.
    std::vector<double> per_class_iou;

    std::uint64_t count(int gt, int pred) const
    {
        return confusion[static_cast<std::size_t>(gt) * num_classes + pred];
    }

    /// Derives the metrics from a confusion matrix. Throws Error("empty") when it sums to 0.
    static SegEval from_confusion(int num_classes, std::vector<std::uint64_t> confusion,
                                  ClassSet classes = ClassSet::present);
};

/// Adds pixel counts to `confusion` (num_classes^2 entries). Pixels where either
/// label equals ignore_index are skipped.
void accumulate_confusion(const LabelImage& pred, const LabelImage& gt, const SegEvalOptions& options,
                          std::span<std::uint64_t> confusion);

SegEval seg_eval(const LabelImage& pred, const LabelImage& gt, const SegEvalOptions& options);

// ---------------------------------------------------------------------------
// Rotation-disturbance validation

/// Yaw {0, 90, 180, 270} x pitch {0, 5} x roll {0, 5}, yaw-major.
std::vector<RotationSpec> standard_sga_grid();

struct SgaSample {
    std::optional<RgbImage> rgb;
    std::optional<DepthImage> depth;
    LabelImage gt;
};

/// What a predictor sees for one sample under one rotation.
struct SgaView {
    const RgbImage* rgb = nullptr;     ///< rotated, null when the sample has none
    const DepthImage* depth = nullptr; ///< rotated, null when the sample has none
    const LabelImage& gt;              ///< rotated ground truth
    RotationSpec rotation;
    std::size_t sample_index = 0;
    std::size_t rotation_index = 0;
};

using Predictor = std::function<LabelImage(const SgaView&)>;

struct SgaOptions {
    SegEvalOptions eval;
    Sampling rgb_sampling = Sampling::bilinear;
    Sampling depth_sampling = Sampling::nearest;
};

/// Raised when a predictor fails; carries the rotation being evaluated.
class SgaError : public Error {
public:
    SgaError(const RotationSpec& rotation, const std::string& message);
    const RotationSpec& rotation() const noexcept { return rotation_; }

private:
    RotationSpec rotation_;
};

/// One SegEval per rotation (in grid order), each accumulated over all samples.
std::vector<SegEval> sga_run(std::span<const SgaSample> samples, const Predictor& predict,
                             std::span<const RotationSpec> grid, const SgaOptions& options = {});

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0; ///< sample variance, n - 1 divisor
    double range = 0.0;    ///< max - min
};

/// Throws Error("too_few_results") for fewer than two values.
SummaryStats summarize(std::span<const double> values);

/// Statistics in percent.
struct SgaStats {
    SummaryStats miou;
    SummaryStats pacc;
};

SgaStats sga_stats(std::span<const SegEval> results);

} // namespace panorel
