#include "curvisynth/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace curvisynth {

namespace {

double clamp_prob(double p)
{
    return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

void check_probs(const ProbMap& m, const char* name)
{
    if (m.values.empty()) {
        throw ValidationError(std::string(name) + " is empty");
    }
    if (m.values.size() != static_cast<std::size_t>(m.height) * static_cast<std::size_t>(m.width)) {
        throw ValidationError(std::string(name) + ": value count does not match its shape");
    }
    for (double v : m.values) {
        if (!std::isfinite(v)) {
            throw ValidationError(std::string(name) + " contains a non-finite value");
        }
    }
}

void check_same_shape(const ProbMap& a, const ProbMap& b)
{
    if (a.height != b.height || a.width != b.width) {
        throw ValidationError("shape mismatch: " + std::to_string(a.height) + "x" + std::to_string(a.width) + " vs " +
                              std::to_string(b.height) + "x" + std::to_string(b.width));
    }
}

double mean_log(const ProbMap& m, bool complement)
{
    double acc = 0.0;
    for (double v : m.values) {
        const double p = clamp_prob(v);
        acc += std::log(complement ? 1.0 - p : p);
    }
    return acc / static_cast<double>(m.values.size());
}

std::vector<double> normalized(std::span<const double> v)
{
    double n2 = 0.0;
    for (double x : v) {
        n2 += x * x;
    }
    const double norm = std::sqrt(n2);
    std::vector<double> out(v.begin(), v.end());
    if (norm > 0.0) {
        for (auto& x : out) {
            x /= norm;
        }
    }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_features(const FeatureMap& f, const char* name)
{
    if (f.channels < 1 ||
        f.values.size() != static_cast<std::size_t>(f.height) * static_cast<std::size_t>(f.width) *
                               static_cast<std::size_t>(f.channels)) {
        throw ValidationError(std::string(name) + ": value count does not match its shape");
    }
}

void check_indices(const PartitionSets& parts, const FeatureMap& f, const char* name)
{
    const std::size_t n = static_cast<std::size_t>(f.height) * static_cast<std::size_t>(f.width);
    for (const auto* set : {&parts.positive, &parts.negative}) {
        for (auto i : *set) {
            if (i >= n) {
                throw ValidationError(std::string(name) + ": pixel index outside the feature map");
            }
        }
    }
}

} // namespace

double discriminator_loss(const ProbMap& d_syn, const ProbMap& d_tgt)
{
    check_probs(d_syn, "d_syn");
    check_probs(d_tgt, "d_tgt");
    check_same_shape(d_syn, d_tgt);
    return -(mean_log(d_syn, false) + mean_log(d_tgt, true));
}

double psal(const ProbMap& d_tgt)
{
    check_probs(d_tgt, "d_tgt");
    return -mean_log(d_tgt, false);
}

double seg_loss(const ProbMap& g, const ProbMap& y)
{
    check_probs(g, "label mask");
    check_probs(y, "prediction");
    check_same_shape(g, y);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double p = clamp_prob(y.values[i]);
        acc += g.values[i] * std::log(p) + (1.0 - g.values[i]) * std::log(1.0 - p);
    }
    return -acc / static_cast<double>(g.values.size());
}

double total_loss(double l_seg, double l_psal, double l_cmcl, double lambda)
{
    return l_seg + l_psal + lambda * l_cmcl;
}

PartitionSets partition_pixels(const ProbMap& values, PartitionSource source, double alpha)
{
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw ValidationError("alpha must lie in (0, 0.5)");
    }
    PartitionSets out;
    out.source = source;
    for (std::size_t i = 0; i < values.values.size(); ++i) {
        const double v = values.values[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError("partition input must lie in [0, 1]");
        }
        if (source == PartitionSource::Synthetic) {
            if (v == 1.0) {
                out.positive.push_back(i);
            } else if (v == 0.0) {
                out.negative.push_back(i);
            } else {
                throw ValidationError("synthetic partition expects a binary mask");
            }
        } else if (v >= 1.0 - alpha) {
            out.positive.push_back(i);
        } else if (v <= alpha) {
            out.negative.push_back(i);
        }
    }
    return out;
}

std::size_t sample_count(std::size_t n, double sigma)
{
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw ValidationError("sampling ratio must lie in (0, 1]");
    }
    const auto c = static_cast<std::size_t>(std::ceil(sigma * static_cast<double>(n) - 1e-9));
    return std::min(c, n);
}

std::vector<std::size_t> sample_without_replacement(std::span<const std::size_t> pool, std::size_t count, Rng& rng)
{
    std::vector<std::size_t> items(pool.begin(), pool.end());
    count = std::min(count, items.size());
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
        std::swap(items[i], items[j]);
    }
    items.resize(count);
    return items;
}

KeySets sample_keys(const FeatureMap& syn_features, const FeatureMap& tgt_features, const PartitionSets& parts_syn,
                    const PartitionSets& parts_tgt, double sigma, const KeyCaps& caps, Rng& rng)
{
    check_features(syn_features, "synthetic features");
    check_features(tgt_features, "target features");
    if (syn_features.channels != tgt_features.channels) {
        throw ValidationError("synthetic and target features differ in channel count");
    }
    check_indices(parts_syn, syn_features, "synthetic partition");
    check_indices(parts_tgt, tgt_features, "target partition");
    if (parts_syn.positive.empty()) {
        throw ValidationError("no curvilinear pixels to anchor CMCL");
    }
    if (parts_tgt.positive.empty()) {
        throw DegenerateBatch("target prediction has no confident curvilinear pixels");
    }

    const std::size_t q_n = std::min(sample_count(parts_syn.positive.size(), sigma), caps.queries);
    const std::size_t k_n = std::min(sample_count(parts_tgt.positive.size(), sigma), caps.positives);
    std::size_t neg_syn = sample_count(parts_syn.negative.size(), sigma);
    std::size_t neg_tgt = sample_count(parts_tgt.negative.size(), sigma);
    if (neg_syn + neg_tgt > caps.negatives) {
        const std::size_t half = caps.negatives / 2;
        if (neg_syn < half) {
            neg_tgt = caps.negatives - neg_syn;
        } else if (neg_tgt < caps.negatives - half) {
            neg_syn = caps.negatives - neg_tgt;
        } else {
            neg_syn = half;
            neg_tgt = caps.negatives - half;
        }
    }

    const auto q_idx = sample_without_replacement(parts_syn.positive, q_n, rng);
    const auto k_idx = sample_without_replacement(parts_tgt.positive, k_n, rng);
    const auto ns_idx = sample_without_replacement(parts_syn.negative, neg_syn, rng);
    const auto nt_idx = sample_without_replacement(parts_tgt.negative, neg_tgt, rng);

    KeySets keys;
    keys.dim = syn_features.channels;
    for (auto i : q_idx) {
        keys.queries.push_back(normalized(syn_features.at(i)));
    }
    for (auto i : k_idx) {
        keys.positive_keys.push_back(normalized(tgt_features.at(i)));
    }
    for (auto i : ns_idx) {
        keys.negative_keys.push_back(normalized(syn_features.at(i)));
    }
    for (auto i : nt_idx) {
        keys.negative_keys.push_back(normalized(tgt_features.at(i)));
    }
    return keys;
}

double cmcl(const KeySets& keys, double tau)
{
    if (!(tau > 0.0)) {
        throw ValidationError("temperature must be positive");
    }
    if (keys.queries.empty() || keys.positive_keys.empty()) {
        throw DegenerateBatch("contrastive loss needs at least one query and one target-positive key");
    }
    const auto dim = keys.queries.front().size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& k : keys.positive_keys) {
        if (k.size() != dim) {
            throw ValidationError("key dimension mismatch");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            mean[c] += k[c];
        }
    }
    const auto anchor = normalized(mean);
    if (std::all_of(anchor.begin(), anchor.end(), [](double v) { return v == 0.0; })) {
        throw DegenerateBatch("target-positive keys cancel out");
    }

    double total = 0.0;
    std::vector<double> logits;
    for (const auto& q : keys.queries) {
        if (q.size() != dim) {
            throw ValidationError("query dimension mismatch");
        }
        const double pos = dot(q, anchor) / tau;
        logits.assign(1, pos);
        for (const auto& k : keys.negative_keys) {
            if (k.size() != dim) {
                throw ValidationError("key dimension mismatch");
            }
            logits.push_back(dot(q, k) / tau);
        }
        const double m = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double l : logits) {
            sum += std::exp(l - m);
        }
        total += -pos + m + std::log(sum);
    }
    return total / static_cast<double>(keys.queries.size());
}

} // namespace curvisynth
