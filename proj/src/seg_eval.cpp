#include "panorel/sga.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace panorel {

void accumulate_confusion(const LabelImage& pred, const LabelImage& gt, const SegEvalOptions& options,
                          std::span<std::uint64_t> confusion)
{
    const int c = options.num_classes;
    if (c < 1) {
        throw Error("invalid_argument", "num_classes must be positive");
    }
    if (!(pred.grid() == gt.grid()) || pred.channels() != 1 || gt.channels() != 1) {
        throw Error("shape_mismatch", "prediction and ground truth must be single-channel images on one grid");
    }
    if (confusion.size() != static_cast<std::size_t>(c) * static_cast<std::size_t>(c)) {
        throw Error("shape_mismatch", "confusion buffer has the wrong size");
    }
    const auto p = pred.data();
    const auto g = gt.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int pl = p[i];
        const int gl = g[i];
        if (pl == options.ignore_index || gl == options.ignore_index) {
            continue;
        }
        if (pl >= c || gl >= c) {
            throw Error("label_out_of_range", "label " + std::to_string(std::max(pl, gl)) +
                                                  " is not below num_classes " + std::to_string(c));
        }
        ++confusion[static_cast<std::size_t>(gl) * c + pl];
    }
}

SegEval SegEval::from_confusion(int num_classes, std::vector<std::uint64_t> confusion, ClassSet classes)
{
    const auto c = static_cast<std::size_t>(num_classes);
    if (num_classes < 1 || confusion.size() != c * c) {
        throw Error("shape_mismatch", "confusion matrix does not match num_classes");
    }
    SegEval e;
    e.num_classes = num_classes;
    e.confusion = std::move(confusion);
    const std::uint64_t total = std::accumulate(e.confusion.begin(), e.confusion.end(), std::uint64_t{0});
    if (total == 0) {
        throw Error("empty", "no evaluated pixels");
    }
    std::uint64_t correct = 0;
    double iou_sum = 0.0;
    int iou_count = 0;
    e.per_class_iou.assign(c, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < c; ++k) {
        std::uint64_t row = 0;
        std::uint64_t col = 0;
        for (std::size_t j = 0; j < c; ++j) {
            row += e.confusion[k * c + j];
            col += e.confusion[j * c + k];
        }
        const std::uint64_t tp = e.confusion[k * c + k];
        correct += tp;
        const std::uint64_t uni = row + col - tp;
        if (uni > 0) {
            e.per_class_iou[k] = static_cast<double>(tp) / static_cast<double>(uni);
            iou_sum += e.per_class_iou[k];
            ++iou_count;
        } else if (classes == ClassSet::all) {
            ++iou_count;
        }
    }
    e.miou = iou_count > 0 ? iou_sum / iou_count : 0.0;
    e.pacc = static_cast<double>(correct) / static_cast<double>(total);
    return e;
}

SegEval seg_eval(const LabelImage& pred, const LabelImage& gt, const SegEvalOptions& options)
{
    if (options.num_classes < 1) {
        throw Error("invalid_argument", "num_classes must be positive");
    }
    std::vector<std::uint64_t> confusion(static_cast<std::size_t>(options.num_classes) * options.num_classes, 0);
    accumulate_confusion(pred, gt, options, confusion);
    return SegEval::from_confusion(options.num_classes, std::move(confusion), options.classes);
}

} // namespace panorel
