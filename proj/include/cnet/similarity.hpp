#pragma once

// Overlap, divergence, reliability and perspective-weighted similarity.
//
// For artifacts a, a' and perspective p, with V(x) the effective attribute
// set and s the attribute measure:
//
//   O(a,a',p) = s(V(a) ∩ V(a') ∩ V(p))
//   D(a,a',p) = s(V(a) ∩ V(p)) + s(V(a') ∩ V(p)) - 2 O(a,a',p)
//   R(p,a,a') = (s(V(a) ∩ V(p)) + s(V(a') ∩ V(p))) / (|a| + |a'|)
//
// and the default similarity over a perspective set P with weights v is
//
//   S = Σ_i v_i R_i O_i / (O_i + D_i)        (term is 0 when O_i + D_i = 0)
//
// O and D are exact integers; R and S are exact rationals.

#include "cnet/model.hpp"
#include "cnet/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cnet {

// s: the measure applied to attribute sets. Cardinality.
std::int64_t attribute_measure(const AttributeSet& attributes);

std::int64_t overlap(const AttributeSet& a, const AttributeSet& b, const AttributeSet& perspective);
std::int64_t divergence(const AttributeSet& a, const AttributeSet& b, const AttributeSet& perspective);
// Requires s(a) + s(b) > 0.
Rational reliability(const AttributeSet& perspective, const AttributeSet& a, const AttributeSet& b);

std::int64_t overlap(const Artifact& a, const Artifact& b, const Perspective& p);
std::int64_t divergence(const Artifact& a, const Artifact& b, const Perspective& p);
Rational reliability(const Perspective& p, const Artifact& a, const Artifact& b);

struct PairMetrics {
    std::int64_t overlap = 0;
    std::int64_t divergence = 0;
    Rational reliability;
    // O / (O + D), or 0 when the perspective sees neither artifact.
    Rational overlap_fraction;
};

PairMetrics pair_metrics(const Artifact& a, const Artifact& b, const Perspective& p);

// Ordered, nonempty, unique ids. Order fixes weight-vector indexing.
class PerspectiveSet {
public:
    explicit PerspectiveSet(std::vector<Perspective> perspectives);

    std::size_t size() const { return perspectives_.size(); }
    const Perspective& operator[](std::size_t i) const { return perspectives_[i]; }
    auto begin() const { return perspectives_.begin(); }
    auto end() const { return perspectives_.end(); }
    const std::vector<Perspective>& perspectives() const { return perspectives_; }

private:
    std::vector<Perspective> perspectives_;
};

class WeightVector {
public:
    // Nonnegative, at least one positive entry. Throws ConfigError otherwise.
    static WeightVector raw(std::vector<Rational> weights);
    static WeightVector normalized(std::vector<Rational> weights);

    const std::vector<Rational>& values() const { return weights_; }
    std::size_t size() const { return weights_.size(); }
    const Rational& operator[](std::size_t i) const { return weights_[i]; }
    bool is_normalized() const { return normalized_; }
    Rational sum() const;

    WeightVector normalize() const;
    // Multiplies every entry by factor > 0; the result is flagged raw.
    WeightVector scaled(const Rational& factor) const;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    WeightVector(std::vector<Rational> weights, bool normalized)
        : weights_(std::move(weights)), normalized_(normalized) {}

    std::vector<Rational> weights_;
    bool normalized_ = false;
};

// How per-perspective metrics fold into one score. The default is the only
// one guaranteed to stay within [0, Σ v_i]; the others exist for comparison.
enum class SimilarityFormula {
    weighted_overlap_fraction,     // Σ v R O/(O+D)
    weighted_overlap_minus_divergence,  // Σ v R (O-D)
    reliability_normalized,        // Σ v R O/(O+D) / Σ v R
};

const char* to_string(SimilarityFormula formula);
SimilarityFormula parse_formula(const std::string& text);

// Folds one pair's metrics (one entry per perspective) into a score.
Rational combine(const std::vector<PairMetrics>& per_perspective, const WeightVector& weights,
                 SimilarityFormula formula);

// Throws ConfigError when weights and perspectives differ in length.
Rational similarity(const PerspectiveSet& perspectives, const WeightVector& weights, const Artifact& a,
                    const Artifact& b,
                    SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction);

struct NodeInfo {
    std::string id;
    std::string group;
    std::string era;

    friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    // values is row-major, size nodes.size()^2.
    SimilarityMatrix(std::vector<NodeInfo> nodes, std::vector<Rational> values, WeightVector weights,
                     SimilarityFormula formula);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<NodeInfo>& nodes() const { return nodes_; }
    const Rational& at(std::size_t i, std::size_t j) const { return values_[i * nodes_.size() + j]; }
    const std::vector<Rational>& values() const { return values_; }
    const WeightVector& weights() const { return weights_; }
    SimilarityFormula formula() const { return formula_; }

    bool is_symmetric() const;
    SimilarityMatrix scaled(const Rational& factor) const;

private:
    std::vector<NodeInfo> nodes_;
    std::vector<Rational> values_;
    WeightVector weights_ = WeightVector::raw({Rational(1)});
    SimilarityFormula formula_ = SimilarityFormula::weighted_overlap_fraction;
};

// Requires at least two artifacts (ConfigError otherwise).
SimilarityMatrix similarity_matrix(
    const PerspectiveSet& perspectives, const WeightVector& weights,
    const std::vector<Artifact>& artifacts,
    SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction);

WeightVector weights_uniform(const PerspectiveSet& perspectives);

struct ImpliedWeights {
    WeightVector weights;
    // Mean of R over all unordered pairs, per perspective.
    std::vector<Rational> mean_reliability;
    // True when every mean reliability was 0 and uniform weights were used.
    bool uniform_fallback = false;
};

ImpliedWeights weights_implied(const PerspectiveSet& perspectives,
                               const std::vector<Artifact>& artifacts);

// Pair metrics for every unordered artifact pair and every perspective,
// computed once. Weight changes (slider moves, sweeps) only redo the fold.
class ComparisonTable {
public:
    // Artifacts are taken as-is: their attribute sets are the effective sets.
    ComparisonTable(PerspectiveSet perspectives, std::vector<Artifact> artifacts);

    // Validates every artifact and perspective against the structure
    // (DataError naming the entity) and applies the closure mode first.
    static ComparisonTable build(const ConceptualStructure& structure,
                                 const std::vector<Artifact>& artifacts,
                                 const std::vector<Perspective>& perspectives, Closure closure);

    const PerspectiveSet& perspectives() const { return perspectives_; }
    const std::vector<Artifact>& artifacts() const { return artifacts_; }
    const std::vector<PairMetrics>& metrics(std::size_t i, std::size_t j) const;

    SimilarityMatrix matrix(const WeightVector& weights,
                            SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction) const;
    ImpliedWeights implied_weights() const;

private:
    std::size_t slot(std::size_t i, std::size_t j) const;

    PerspectiveSet perspectives_;
    std::vector<Artifact> artifacts_;
    // Upper triangle including the diagonal.
    std::vector<std::vector<PairMetrics>> pairs_;
};

} // namespace cnet
