#include <gtest/gtest.h>

#include "cnet/errors.hpp"
#include "cnet/similarity.hpp"
#include "cnet/synthetic.hpp"

#include "support/oracles.hpp"

#include <random>

using namespace cnet;

namespace {

const Artifact a{"a", "G1", "ethnographic", {"x", "y", "z"}};
const Artifact a2{"a2", "G2", "ethnographic", {"y", "z", "w"}};
const Perspective p_xyzw{"p1", "p1", {"x", "y", "z", "w"}};
const Perspective p_yw{"p2", "p2", {"y", "w"}};
const Perspective p_u{"p3", "p3", {"u"}};
const Perspective p_all{"all", "all", {"x", "y", "z", "w", "u"}};

Rational q(long n, long d = 1) {
    return Rational(n, d);
}

} // namespace

TEST(Overlap, Examples) {
    EXPECT_EQ(overlap(a, a2, p_xyzw), 2);
    EXPECT_EQ(overlap(a, a, p_xyzw), 3);
    EXPECT_EQ(overlap(a, a2, p_u), 0);
}

TEST(Divergence, Examples) {
    EXPECT_EQ(divergence(a, a2, p_xyzw), 2);
    EXPECT_EQ(divergence(a, a, p_xyzw), 0);
    EXPECT_EQ(divergence(a, a, p_yw), 0);
    EXPECT_EQ(divergence(a, a2, p_yw), 1);
}

TEST(Reliability, Examples) {
    EXPECT_EQ(reliability(p_all, a, a2), q(1));
    EXPECT_EQ(reliability(p_yw, a, a2), q(1, 2));
    EXPECT_EQ(reliability(p_u, a, a2), q(0));
}

TEST(Similarity, Examples) {
    EXPECT_EQ(similarity(PerspectiveSet({p_all}), WeightVector::raw({q(1)}), a, a), q(1));
    EXPECT_EQ(similarity(PerspectiveSet({p_xyzw}), WeightVector::raw({q(1)}), a, a2), q(1, 2));
    EXPECT_EQ(similarity(PerspectiveSet({p_yw, p_u}), WeightVector::raw({q(1, 2), q(1, 2)}), a, a2), q(1, 8));
}

TEST(Similarity, Errors) {
    PerspectiveSet two({p_yw, p_u});
    EXPECT_THROW(similarity(two, WeightVector::raw({q(1)}), a, a2), ConfigError);
    EXPECT_THROW(WeightVector::raw({q(-1), q(2)}), ConfigError);
    EXPECT_THROW(WeightVector::raw({q(0), q(0)}), ConfigError);
    EXPECT_THROW(PerspectiveSet({p_yw, p_yw}), DuplicateIdError);
    EXPECT_THROW(PerspectiveSet({}), ConfigError);
}

TEST(Similarity, DisjointPerspectiveContributesZero) {
    auto m = pair_metrics(a, a2, p_u);
    EXPECT_EQ(m.overlap, 0);
    EXPECT_EQ(m.divergence, 0);
    EXPECT_EQ(m.reliability, 0);
    EXPECT_EQ(m.overlap_fraction, 0);
}

TEST(Similarity, FormulaVariants) {
    PerspectiveSet P({p_xyzw, p_yw});
    auto V = WeightVector::raw({q(1, 2), q(1, 2)});
    // Per perspective: (O, D, R) = (2, 2, 1) and (1, 1, 1/2).
    EXPECT_EQ(similarity(P, V, a, a2, SimilarityFormula::weighted_overlap_fraction),
              q(1, 2) * q(1, 2) + q(1, 2) * q(1, 2) * q(1, 2));
    EXPECT_EQ(similarity(P, V, a, a2, SimilarityFormula::weighted_overlap_minus_divergence), q(0));
    // (1/4 + 1/8) / (1/2 + 1/4)
    EXPECT_EQ(similarity(P, V, a, a2, SimilarityFormula::reliability_normalized), q(1, 2));
    for (auto f : {SimilarityFormula::weighted_overlap_fraction, SimilarityFormula::weighted_overlap_minus_divergence,
                   SimilarityFormula::reliability_normalized})
        EXPECT_EQ(parse_formula(to_string(f)), f);
    EXPECT_THROW(parse_formula("cosine"), ConfigError);
}

TEST(Weights, Uniform) {
    EXPECT_EQ(weights_uniform(PerspectiveSet({p_u})).values(), std::vector<Rational>{q(1)});
    auto three = weights_uniform(PerspectiveSet({p_u, p_yw, p_xyzw}));
    EXPECT_EQ(three.values(), (std::vector<Rational>{q(1, 3), q(1, 3), q(1, 3)}));
    EXPECT_TRUE(three.is_normalized());
    auto four = weights_uniform(PerspectiveSet({p_u, p_yw, p_xyzw, p_all}));
    EXPECT_EQ(four.sum(), q(1));
    EXPECT_EQ(four[0], q(1, 4));
}

TEST(Weights, Implied) {
    auto implied = weights_implied(PerspectiveSet({p_xyzw, p_yw}), {a, a2});
    EXPECT_EQ(implied.mean_reliability, (std::vector<Rational>{q(1), q(1, 2)}));
    EXPECT_EQ(implied.weights.values(), (std::vector<Rational>{q(2, 3), q(1, 3)}));
    EXPECT_FALSE(implied.uniform_fallback);

    auto equal = weights_implied(PerspectiveSet({p_all, Perspective{"again", "again", p_all.attributes}}), {a, a2});
    EXPECT_EQ(equal.weights.values(), (std::vector<Rational>{q(1, 2), q(1, 2)}));

    auto with_disjoint = weights_implied(PerspectiveSet({p_xyzw, p_u}), {a, a2});
    EXPECT_EQ(with_disjoint.weights[1], q(0));

    auto fallback = weights_implied(PerspectiveSet({p_u, Perspective{"v", "v", {"v"}}}), {a, a2});
    EXPECT_TRUE(fallback.uniform_fallback);
    EXPECT_EQ(fallback.weights.values(), (std::vector<Rational>{q(1, 2), q(1, 2)}));
}

TEST(Matrix, TwoIdenticalArtifacts) {
    Artifact twin = a;
    twin.id = "twin";
    auto m = similarity_matrix(PerspectiveSet({p_all}), WeightVector::raw({q(1)}), {a, twin});
    ASSERT_EQ(m.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(m.at(i, j), q(1));
    }
}

TEST(Matrix, MatchesElementwiseSimilarity) {
    Artifact c{"c", "G3", "archaeological", {"x", "w"}};
    PerspectiveSet P({p_xyzw, p_yw, p_u});
    auto V = WeightVector::normalized({q(1), q(2), q(3)});
    std::vector<Artifact> arts{a, a2, c};
    auto m = similarity_matrix(P, V, arts);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m.at(i, j), similarity(P, V, arts[i], arts[j]));
    }
    EXPECT_EQ(m.nodes()[2].era, "archaeological");
}

TEST(Matrix, SyntheticScaleIsExactlySymmetric) {
    Dataset d = gen_synthetic(3);
    PerspectiveSet P(d.perspectives);
    auto m = similarity_matrix(P, weights_uniform(P), d.artifacts);
    ASSERT_EQ(m.size(), 15u);
    EXPECT_TRUE(m.is_symmetric());
    for (const auto& v : m.values()) {
        EXPECT_GE(v, 0);
        EXPECT_LE(v, 1);
    }
}

TEST(Matrix, NeedsTwoArtifacts) {
    EXPECT_THROW(similarity_matrix(PerspectiveSet({p_all}), WeightVector::raw({q(1)}), {a}), ConfigError);
}

TEST(ComparisonTable, BuildValidatesAgainstStructure) {
    ConceptualStructure s({{"x", "x", NodeKind::attribute, {}}, {"y", "y", NodeKind::attribute, {}}}, {});
    std::vector<Artifact> arts{{"a", "", "", {"x"}}, {"b", "", "", {"y"}}};
    EXPECT_NO_THROW(ComparisonTable::build(s, arts, {{"p", "p", {"x", "y"}}}, Closure::none));
    std::vector<Artifact> foreign{{"a", "", "", {"x"}}, {"b", "", "", {"z"}}};
    try {
        ComparisonTable::build(s, foreign, {{"p", "p", {"x"}}}, Closure::none);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.entity(), "b");
    }
    EXPECT_THROW(ComparisonTable::build(s, arts, {{"p", "p", {"nope"}}}, Closure::none), ValidationError);
}

TEST(ComparisonTable, AncestorClosureChangesMetrics) {
    ConceptualStructure s({{"strings", "strings", NodeKind::attribute, {}},
                           {"metal", "metal", NodeKind::attribute, {}},
                           {"nylon", "nylon", NodeKind::attribute, {}}},
                          {{"strings", "metal"}, {"strings", "nylon"}});
    std::vector<Artifact> arts{{"m", "", "", {"metal"}}, {"n", "", "", {"nylon"}}};
    std::vector<Perspective> ps{{"all", "all", {"strings", "metal", "nylon"}}};
    auto flat = ComparisonTable::build(s, arts, ps, Closure::none);
    auto closed = ComparisonTable::build(s, arts, ps, Closure::ancestors);
    EXPECT_EQ(flat.metrics(0, 1)[0].overlap, 0);
    EXPECT_EQ(closed.metrics(0, 1)[0].overlap, 1);  // shared "strings"
    EXPECT_EQ(closed.metrics(0, 1)[0].divergence, 2);
}

// ---- properties over random small instances ----

TEST(Properties, OverlapAndDivergenceMatchBruteForce) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = oracle::random_instance(rng);
        for (const auto& x : inst.artifacts) {
            for (const auto& y : inst.artifacts) {
                for (const auto& p : inst.perspectives) {
                    auto expected = oracle::brute_force_counts(inst.universe, x.attributes, y.attributes, p.attributes);
                    ASSERT_EQ(overlap(x, y, p), expected.overlap);
                    ASSERT_EQ(divergence(x, y, p), expected.divergence);
                }
            }
        }
    }
}

TEST(Properties, SymmetryBoundsAndWholeStructureReliability) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = oracle::random_instance(rng);
        PerspectiveSet P(inst.perspectives);
        auto V = weights_uniform(P);
        auto whole = oracle::whole_structure(inst.universe);
        for (const auto& x : inst.artifacts) {
            for (const auto& y : inst.artifacts) {
                EXPECT_EQ(reliability(whole, x, y), 1);
                for (const auto& p : inst.perspectives) {
                    EXPECT_EQ(overlap(x, y, p), overlap(y, x, p));
                    EXPECT_EQ(divergence(x, y, p), divergence(y, x, p));
                    EXPECT_GE(divergence(x, y, p), 0);
                    EXPECT_EQ(reliability(p, x, y), reliability(p, y, x));
                    Rational r = reliability(p, x, y);
                    EXPECT_GE(r, 0);
                    EXPECT_LE(r, 1);
                    auto in_x = restrict(x.attributes, p).size(), in_y = restrict(y.attributes, p).size();
                    EXPECT_LE(overlap(x, y, p), static_cast<std::int64_t>(std::min(in_x, in_y)));
                    // D = 0 exactly when the restricted sets coincide.
                    EXPECT_EQ(divergence(x, y, p) == 0, restrict(x.attributes, p) == restrict(y.attributes, p));
                }
                Rational s = similarity(P, V, x, y);
                EXPECT_EQ(s, similarity(P, V, y, x));
                EXPECT_GE(s, 0);
                EXPECT_LE(s, 1);
            }
            // Self-similarity under the whole structure is 1.
            EXPECT_EQ(similarity(PerspectiveSet({whole}), WeightVector::raw({Rational(1)}), x, x), 1);
        }
    }
}

TEST(Properties, AddingASharedOrPrivateAttribute) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = oracle::random_instance(rng);
        const auto& p = inst.perspectives[0];
        Artifact x = inst.artifacts[0], y = inst.artifacts[1];
        std::string fresh = "fresh";
        Perspective widened = p;
        widened.attributes.insert(fresh);
        auto o = overlap(x, y, widened), d = divergence(x, y, widened);

        Artifact xs = x, ys = y;
        xs.attributes.insert(fresh);
        ys.attributes.insert(fresh);
        EXPECT_EQ(overlap(xs, ys, widened), o + 1);
        EXPECT_EQ(divergence(xs, ys, widened), d);

        EXPECT_EQ(overlap(xs, y, widened), o);
        EXPECT_EQ(divergence(xs, y, widened), d + 1);
    }
}

TEST(Properties, SimilarityMonotoneInReliabilityAtFixedOverlapFraction) {
    // Scaling both artifacts' off-perspective content down raises R while
    // leaving O and D (hence O/(O+D)) unchanged.
    Perspective p{"p", "p", {"x", "y"}};
    Artifact x{"x", "", "", {"x", "y", "o1", "o2", "o3"}};
    Artifact y{"y", "", "", {"y", "o4", "o5"}};
    Artifact x_small{"x", "", "", {"x", "y", "o1"}};
    PerspectiveSet P({p});
    auto V = WeightVector::raw({Rational(1)});
    EXPECT_EQ(pair_metrics(x, y, p).overlap_fraction, pair_metrics(x_small, y, p).overlap_fraction);
    EXPECT_LT(reliability(p, x, y), reliability(p, x_small, y));
    EXPECT_LT(similarity(P, V, x, y), similarity(P, V, x_small, y));
}

TEST(Properties, WeightScalingScalesEveryEntry) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto inst = oracle::random_instance(rng);
        PerspectiveSet P(inst.perspectives);
        auto V = weights_uniform(P);
        auto m = similarity_matrix(P, V, inst.artifacts);
        auto m3 = similarity_matrix(P, V.scaled(Rational(3)), inst.artifacts);
        for (std::size_t k = 0; k < m.values().size(); ++k) EXPECT_EQ(m3.values()[k], 3 * m.values()[k]);
    }
}
