#pragma once

#include "curvisynth/image.hpp"
#include "curvisynth/random.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvisynth {

/// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before
/// any logarithm is taken.
inline constexpr double kProbEpsilon = 1e-7;

/// Signals a batch for which the contrastive term is undefined (no target
/// foreground, no queries). Callers may skip the term for that batch.
class DegenerateBatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A flat H x W probability or label map.
struct ProbMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const { return values.size(); }
};

/// H x W x C feature map, C values contiguous per pixel.
struct FeatureMap {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> values;

    [[nodiscard]] std::span<const double> at(std::size_t pixel) const
    {
        return {values.data() + pixel * static_cast<std::size_t>(channels), static_cast<std::size_t>(channels)};
    }
};

// Adversarial terms, written in the form a trainer minimizes:
//   discriminator_loss = -(mean log d_syn + mean log(1 - d_tgt))
//   psal               = -mean log d_tgt
// where d_* are discriminator outputs on synthetic and target predictions.

double discriminator_loss(const ProbMap& d_syn, const ProbMap& d_tgt);
double psal(const ProbMap& d_tgt);

/// Full binary cross-entropy -mean(g log y + (1-g) log(1-y)).
double seg_loss(const ProbMap& g, const ProbMap& y);

double total_loss(double l_seg, double l_psal, double l_cmcl, double lambda);

enum class PartitionSource { Synthetic, Target };

struct PartitionSets {
    std::vector<std::size_t> positive;
    std::vector<std::size_t> negative;
    PartitionSource source = PartitionSource::Synthetic;
};

/// Synthetic: split on the label (values must be 0 or 1). Target: split on
/// the prediction, positive if y >= 1 - alpha, negative if y <= alpha,
/// ignored otherwise. Index lists are ascending.
PartitionSets partition_pixels(const ProbMap& values, PartitionSource source, double alpha);

struct KeyCaps {
    std::size_t queries = 500;
    std::size_t positives = 500;
    std::size_t negatives = 1000;
};

/// Unit-norm C-dim vectors.
struct KeySets {
    int dim = 0;
    std::vector<std::vector<double>> queries;        // synthetic foreground
    std::vector<std::vector<double>> positive_keys;  // confident target foreground
    std::vector<std::vector<double>> negative_keys;  // synthetic background, then target background
};

/// Number of indices drawn from a set of `n` at ratio sigma: ceil(sigma n).
std::size_t sample_count(std::size_t n, double sigma);

/// Draws min(cap, count) distinct entries of `pool` uniformly (partial
/// Fisher-Yates), preserving draw order.
std::vector<std::size_t> sample_without_replacement(std::span<const std::size_t> pool, std::size_t count, Rng& rng);

/// Samples keys from both images. Draw order: synthetic positives, target
/// positives, synthetic negatives, target negatives. The negative cap is
/// shared: each source gets up to half, and any unused share goes to the
/// other source.
///
/// Throws ValidationError if there are no synthetic foreground pixels and
/// DegenerateBatch if the target has no confident foreground.
KeySets sample_keys(const FeatureMap& syn_features, const FeatureMap& tgt_features, const PartitionSets& parts_syn,
                    const PartitionSets& parts_tgt, double sigma, const KeyCaps& caps, Rng& rng);

/// Per-query InfoNCE against the normalized mean of the target-positive
/// keys, averaged over queries, evaluated with log-sum-exp.
double cmcl(const KeySets& keys, double tau);

} // namespace curvisynth
