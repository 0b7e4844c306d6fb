#pragma once

#include "curvisynth/image.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace curvisynth {

struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Each field is absent when its denominator is zero (e.g. sensitivity on
/// a ground truth with no positives) and auc is absent without scores or
/// when the ground truth holds a single class.
struct Metrics {
    Confusion counts;
    std::optional<double> jaccard;
    std::optional<double> dice;
    std::optional<double> accuracy;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
    std::optional<double> auc;
};

Confusion confusion(const Mask& pred, const Mask& gt);

/// Area under the ROC curve by trapezoidal integration over every distinct
/// score threshold; tied scores form a single ROC step.
std::optional<double> roc_auc(std::span<const double> scores, const Mask& gt);

Metrics evaluate(const Mask& pred, const Mask& gt, std::optional<std::span<const double>> scores = std::nullopt);

} // namespace curvisynth
