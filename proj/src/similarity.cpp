#include "cnet/similarity.hpp"

#include "cnet/errors.hpp"

#include <algorithm>
#include <cassert>

namespace cnet {

namespace {

std::int64_t intersection_measure(const AttributeSet& a, const AttributeSet& b) {
    return attribute_measure(restrict(a, b));
}

void check_lengths(const PerspectiveSet& perspectives, const WeightVector& weights) {
    if (perspectives.size() != weights.size())
        throw ConfigError("weight vector has " + std::to_string(weights.size()) + " entries but there are " +
                          std::to_string(perspectives.size()) + " perspectives");
}

void check_unique_ids(const std::vector<Artifact>& artifacts) {
    std::set<std::string> seen;
    for (const auto& a : artifacts) {
        if (!seen.insert(a.id).second) throw DuplicateIdError("duplicate artifact id " + a.id, a.id);
    }
}

} // namespace

std::int64_t attribute_measure(const AttributeSet& attributes) {
    return static_cast<std::int64_t>(attributes.size());
}

std::int64_t overlap(const AttributeSet& a, const AttributeSet& b, const AttributeSet& perspective) {
    return attribute_measure(restrict(restrict(a, b), perspective));
}

std::int64_t divergence(const AttributeSet& a, const AttributeSet& b, const AttributeSet& perspective) {
    std::int64_t d = intersection_measure(a, perspective) + intersection_measure(b, perspective) -
                     2 * overlap(a, b, perspective);
    assert(d >= 0);
    return d;
}

Rational reliability(const AttributeSet& perspective, const AttributeSet& a, const AttributeSet& b) {
    std::int64_t total = attribute_measure(a) + attribute_measure(b);
    if (total <= 0) throw DataError("reliability undefined for two empty artifacts");
    return Rational(intersection_measure(a, perspective) + intersection_measure(b, perspective), total);
}

std::int64_t overlap(const Artifact& a, const Artifact& b, const Perspective& p) {
    return overlap(a.attributes, b.attributes, p.attributes);
}

std::int64_t divergence(const Artifact& a, const Artifact& b, const Perspective& p) {
    return divergence(a.attributes, b.attributes, p.attributes);
}

Rational reliability(const Perspective& p, const Artifact& a, const Artifact& b) {
    return reliability(p.attributes, a.attributes, b.attributes);
}

PairMetrics pair_metrics(const Artifact& a, const Artifact& b, const Perspective& p) {
    PairMetrics m;
    std::int64_t in_a = intersection_measure(a.attributes, p.attributes);
    std::int64_t in_b = intersection_measure(b.attributes, p.attributes);
    m.overlap = overlap(a, b, p);
    m.divergence = in_a + in_b - 2 * m.overlap;
    assert(m.divergence >= 0);
    std::int64_t total = attribute_measure(a.attributes) + attribute_measure(b.attributes);
    if (total <= 0) throw DataError("reliability undefined for empty artifacts " + a.id + ", " + b.id);
    m.reliability = Rational(in_a + in_b, total);
    if (m.overlap + m.divergence > 0) m.overlap_fraction = Rational(m.overlap, m.overlap + m.divergence);
    return m;
}

PerspectiveSet::PerspectiveSet(std::vector<Perspective> perspectives)
    : perspectives_(std::move(perspectives)) {
    if (perspectives_.empty()) throw ConfigError("perspective set is empty");
    std::set<std::string> seen;
    for (const auto& p : perspectives_) {
        if (!seen.insert(p.id).second) throw DuplicateIdError("duplicate perspective id " + p.id, p.id);
    }
}

WeightVector WeightVector::raw(std::vector<Rational> weights) {
    if (weights.empty()) throw ConfigError("weight vector is empty");
    bool any_positive = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0) throw ConfigError("weight " + std::to_string(i) + " is negative");
        any_positive = any_positive || weights[i] > 0;
    }
    if (!any_positive) throw ConfigError("at least one weight must be positive");
    Rational total = 0;
    for (const auto& w : weights) total += w;
    bool sums_to_one = total == 1;
    return WeightVector(std::move(weights), sums_to_one);
}

WeightVector WeightVector::normalized(std::vector<Rational> weights) {
    return raw(std::move(weights)).normalize();
}

Rational WeightVector::sum() const {
    Rational total = 0;
    for (const auto& w : weights_) total += w;
    return total;
}

WeightVector WeightVector::normalize() const {
    Rational total = sum();
    std::vector<Rational> out;
    out.reserve(weights_.size());
    for (const auto& w : weights_) out.push_back(w / total);
    return WeightVector(std::move(out), true);
}

WeightVector WeightVector::scaled(const Rational& factor) const {
    if (factor <= 0) throw ConfigError("scale factor must be positive");
    std::vector<Rational> out;
    out.reserve(weights_.size());
    for (const auto& w : weights_) out.push_back(w * factor);
    return WeightVector(std::move(out), factor == 1 && normalized_);
}

const char* to_string(SimilarityFormula formula) {
    switch (formula) {
    case SimilarityFormula::weighted_overlap_fraction: return "weighted-overlap-fraction";
    case SimilarityFormula::weighted_overlap_minus_divergence: return "weighted-overlap-minus-divergence";
    case SimilarityFormula::reliability_normalized: return "reliability-normalized";
    }
    return "unknown";
}

SimilarityFormula parse_formula(const std::string& text) {
    for (auto f : {SimilarityFormula::weighted_overlap_fraction,
                   SimilarityFormula::weighted_overlap_minus_divergence,
                   SimilarityFormula::reliability_normalized}) {
        if (text == to_string(f)) return f;
    }
    throw ConfigError("unknown similarity formula '" + text + "'");
}

Rational combine(const std::vector<PairMetrics>& per_perspective, const WeightVector& weights,
                 SimilarityFormula formula) {
    if (per_perspective.size() != weights.size())
        throw ConfigError("weight vector length does not match perspective count");
    Rational score = 0;
    Rational reliability_mass = 0;
    for (std::size_t i = 0; i < per_perspective.size(); ++i) {
        const PairMetrics& m = per_perspective[i];
        const Rational& v = weights[i];
        if (v == 0) continue;
        switch (formula) {
        case SimilarityFormula::weighted_overlap_fraction:
        case SimilarityFormula::reliability_normalized:
            score += v * m.reliability * m.overlap_fraction;
            break;
        case SimilarityFormula::weighted_overlap_minus_divergence:
            score += v * m.reliability * Rational(m.overlap - m.divergence);
            break;
        }
        reliability_mass += v * m.reliability;
    }
    if (formula == SimilarityFormula::reliability_normalized)
        return reliability_mass == 0 ? Rational(0) : Rational(score / reliability_mass);
    return score;
}

Rational similarity(const PerspectiveSet& perspectives, const WeightVector& weights, const Artifact& a,
                    const Artifact& b, SimilarityFormula formula) {
    check_lengths(perspectives, weights);
    std::vector<PairMetrics> metrics;
    metrics.reserve(perspectives.size());
    for (const auto& p : perspectives) metrics.push_back(pair_metrics(a, b, p));
    return combine(metrics, weights, formula);
}

SimilarityMatrix::SimilarityMatrix(std::vector<NodeInfo> nodes, std::vector<Rational> values,
                                   WeightVector weights, SimilarityFormula formula)
    : nodes_(std::move(nodes)), values_(std::move(values)), weights_(std::move(weights)), formula_(formula) {
    if (values_.size() != nodes_.size() * nodes_.size())
        throw DataError("matrix has " + std::to_string(values_.size()) + " values for " +
                        std::to_string(nodes_.size()) + " nodes");
}

bool SimilarityMatrix::is_symmetric() const {
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (at(i, j) != at(j, i)) return false;
        }
    }
    return true;
}

SimilarityMatrix SimilarityMatrix::scaled(const Rational& factor) const {
    std::vector<Rational> out;
    out.reserve(values_.size());
    for (const auto& v : values_) out.push_back(v * factor);
    return SimilarityMatrix(nodes_, std::move(out), weights_.scaled(factor), formula_);
}

SimilarityMatrix similarity_matrix(const PerspectiveSet& perspectives, const WeightVector& weights,
                                   const std::vector<Artifact>& artifacts, SimilarityFormula formula) {
    return ComparisonTable(perspectives, artifacts).matrix(weights, formula);
}

WeightVector weights_uniform(const PerspectiveSet& perspectives) {
    std::vector<Rational> w(perspectives.size(), Rational(1, static_cast<long>(perspectives.size())));
    return WeightVector::raw(std::move(w));
}

ImpliedWeights weights_implied(const PerspectiveSet& perspectives, const std::vector<Artifact>& artifacts) {
    return ComparisonTable(perspectives, artifacts).implied_weights();
}

ComparisonTable::ComparisonTable(PerspectiveSet perspectives, std::vector<Artifact> artifacts)
    : perspectives_(std::move(perspectives)), artifacts_(std::move(artifacts)) {
    if (artifacts_.size() < 2)
        throw ConfigError("at least two artifacts are needed, got " + std::to_string(artifacts_.size()));
    check_unique_ids(artifacts_);
    const std::size_t n = artifacts_.size();
    pairs_.resize(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            auto& row = pairs_[slot(i, j)];
            row.reserve(perspectives_.size());
            for (const auto& p : perspectives_) row.push_back(pair_metrics(artifacts_[i], artifacts_[j], p));
        }
    }
}

ComparisonTable ComparisonTable::build(const ConceptualStructure& structure,
                                       const std::vector<Artifact>& artifacts,
                                       const std::vector<Perspective>& perspectives, Closure closure) {
    for (const auto& p : perspectives) {
        auto report = validate_perspective(p, structure);
        if (!report.valid()) throw ValidationError(report.violations.front().message, p.id);
    }
    std::vector<Artifact> effective;
    effective.reserve(artifacts.size());
    for (const auto& a : artifacts) {
        auto report = validate_artifact(a, structure);
        if (!report.valid()) throw ValidationError(report.violations.front().message, a.id);
        Artifact copy = a;
        copy.attributes = effective_attributes(a, structure, closure);
        effective.push_back(std::move(copy));
    }
    return ComparisonTable(PerspectiveSet(perspectives), std::move(effective));
}

std::size_t ComparisonTable::slot(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t n = artifacts_.size();
    // Row i of the upper triangle starts after rows 0..i-1 of lengths n, n-1, ...
    return i * n - i * (i - 1) / 2 + (j - i);
}

const std::vector<PairMetrics>& ComparisonTable::metrics(std::size_t i, std::size_t j) const {
    return pairs_[slot(i, j)];
}

SimilarityMatrix ComparisonTable::matrix(const WeightVector& weights, SimilarityFormula formula) const {
    check_lengths(perspectives_, weights);
    const std::size_t n = artifacts_.size();
    std::vector<Rational> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Rational s = combine(metrics(i, j), weights, formula);
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    std::vector<NodeInfo> nodes;
    nodes.reserve(n);
    for (const auto& a : artifacts_) nodes.push_back({a.id, a.group, a.era});
    return SimilarityMatrix(std::move(nodes), std::move(values), weights, formula);
}

ImpliedWeights ComparisonTable::implied_weights() const {
    const std::size_t n = artifacts_.size();
    const std::size_t k = perspectives_.size();
    std::vector<Rational> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& row = metrics(i, j);
            for (std::size_t p = 0; p < k; ++p) sums[p] += row[p].reliability;
        }
    }
    const long pair_count = static_cast<long>(n * (n - 1) / 2);
    ImpliedWeights result{weights_uniform(perspectives_), {}, false};
    bool any_positive = false;
    for (auto& s : sums) {
        result.mean_reliability.push_back(s / pair_count);
        any_positive = any_positive || s > 0;
    }
    if (any_positive)
        result.weights = WeightVector::normalized(result.mean_reliability);
    else
        result.uniform_fallback = true;
    return result;
}

} // namespace cnet
