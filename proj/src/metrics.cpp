#include "curvisynth/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace curvisynth {

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den)
{
    if (den == 0) {
        return std::nullopt;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

Confusion confusion(const Mask& pred, const Mask& gt)
{
    if (pred.height != gt.height || pred.width != gt.width || pred.channels != 1 || gt.channels != 1) {
        throw ValidationError("prediction and ground truth must be single-channel masks of equal size");
    }
    Confusion c;
    for (std::size_t i = 0; i < gt.data.size(); ++i) {
        const bool p = pred.data[i] != 0;
        const bool g = gt.data[i] != 0;
        if (p && g) {
            ++c.tp;
        } else if (p) {
            ++c.fp;
        } else if (g) {
            ++c.fn;
        } else {
            ++c.tn;
        }
    }
    return c;
}

std::optional<double> roc_auc(std::span<const double> scores, const Mask& gt)
{
    if (scores.size() != gt.data.size()) {
        throw ValidationError("score map and ground truth differ in size");
    }
    std::uint64_t pos = 0;
    for (auto v : gt.data) {
        pos += v != 0;
    }
    const std::uint64_t neg = gt.data.size() - pos;
    if (pos == 0 || neg == 0) {
        return std::nullopt;
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    // Walk thresholds from high to low; each group of tied scores adds one
    // ROC point and one trapezoid.
    double area = 0.0;
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        const std::uint64_t tp0 = tp;
        const std::uint64_t fp0 = fp;
        for (; i < order.size() && scores[order[i]] == s; ++i) {
            if (gt.data[order[i]]) {
                ++tp;
            } else {
                ++fp;
            }
        }
        area += static_cast<double>(fp - fp0) * static_cast<double>(tp + tp0) / 2.0;
    }
    return area / (static_cast<double>(pos) * static_cast<double>(neg));
}

Metrics evaluate(const Mask& pred, const Mask& gt, std::optional<std::span<const double>> scores)
{
    Metrics m;
    m.counts = confusion(pred, gt);
    const auto& c = m.counts;
    m.jaccard = ratio(c.tp, c.tp + c.fp + c.fn);
    m.dice = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    m.accuracy = ratio(c.tp + c.tn, c.tp + c.tn + c.fp + c.fn);
    m.sensitivity = ratio(c.tp, c.tp + c.fn);
    m.specificity = ratio(c.tn, c.tn + c.fp);
    if (scores) {
        m.auc = roc_auc(*scores, gt);
    }
    return m;
}

} // namespace curvisynth
