#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nbspec/json.hpp"
#include "nbspec/perturb.hpp"

using namespace nbspec;

namespace {

Eigen::MatrixXd x_of(const Graph& g, std::vector<NodeId> nbrs) { return x_from_formula(g, nbrs).cast<double>(); }

EigenSystem normalized(const Graph& g) { return p_normalize(full_eigensystem(NbMatrix(g)), build_reversal(g)); }

}  // namespace

TEST(LxrNorm, ZeroX) {
    const Graph g = complete_graph(4);
    const auto sys = normalized(g);
    for (NormOrder p : {NormOrder::one, NormOrder::two, NormOrder::infinity}) EXPECT_EQ(lxr_norm(sys, x_of(g, {1}), p), 0.0);
}

TEST(LxrNorm, BelowXDegreeOnCompleteGraph) {
    const Graph g = complete_graph(4);
    const auto sys = normalized(g);
    const double two = lxr_norm(sys, x_of(g, {1, 2}), NormOrder::two);
    EXPECT_GT(two, 0.0);
    EXPECT_LE(two, 18.0);
}

TEST(LxrNorm, HolderInterpolation) {
    for (const Graph& g : {complete_graph(4), petersen_graph(), prune_two_core(erdos_renyi(25, 0.2, 6))}) {
        const auto sys = normalized(g);
        const auto lxr = lxr_matrix(sys, x_of(g, {0, 1, 2}));
        const double one = lxr_norm(lxr, NormOrder::one);
        const double two = lxr_norm(lxr, NormOrder::two);
        const double inf = lxr_norm(lxr, NormOrder::infinity);
        EXPECT_LE(two, std::sqrt(one * inf) * (1 + 1e-12));
    }
}

TEST(LxrNorm, RefusesNearDefective) {
    const Graph g = complete_graph(4);
    auto sys = full_eigensystem(NbMatrix(g));
    sys.near_defective = true;
    EXPECT_THROW(lxr_norm(sys, x_of(g, {1, 2}), NormOrder::two), NumericalError);
}

TEST(EpsilonBound, Arithmetic) {
    EXPECT_EQ(theorem2_bound(2.0, 1.0, 0.0), 0.0);
    EXPECT_EQ(theorem2_bound(2.0, 1.0, 18.0), 4.5);
    // second branch binds when the gap is small
    EXPECT_NEAR(theorem2_bound(2.0, 0.01, 1.0), std::sqrt(100.0) - 2.0, 1e-12);
    // negative second branch is clamped
    EXPECT_NEAR(theorem2_bound(10.0, 100.0, 1.0), 0.01, 1e-15);
    EXPECT_THROW(theorem2_bound(0.0, 1.0, 1.0), DomainError);
    EXPECT_THROW(theorem2_bound(2.0, 0.0, 1.0), DomainError);
}

TEST(XDegree, ClosedForm) {
    EXPECT_EQ(x_degree(complete_graph(4), std::vector<NodeId>{1, 2}), 18);
    EXPECT_EQ(x_degree(cycle_graph(4), std::vector<NodeId>{0, 1}), 8);
    for (NodeId j = 0; j < 10; ++j) EXPECT_EQ(x_degree(petersen_graph(), std::vector<NodeId>{j}), 0);
    const Graph g = erdos_renyi(30, 0.2, 1);
    EXPECT_EQ(x_degree(g, std::vector<NodeId>{0, 4, 9, 17}), x_from_formula(g, std::vector<NodeId>{0, 4, 9, 17}).sum());
}

TEST(Alpha11, Values) {
    const Graph g = complete_graph(4);
    const NbMatrix nb(g);
    const auto pp = perron(nb);
    EXPECT_EQ(alpha11_centrality(pp, x_of(g, {1})), 0.0);
    const double a = alpha11_centrality(pp, x_of(g, {1, 2}));
    EXPECT_NEAR(a, 1.5, 1e-12);
    const auto sys = normalized(g);
    EXPECT_NEAR(alpha11_centrality(sys, x_of(g, {1, 2})), a, 1e-10);
    EXPECT_LE(a, lxr_norm(sys, x_of(g, {1, 2}), NormOrder::two) + 1e-8);
}

TEST(Alpha11, BelowTwoNormOnCorpus) {
    for (const Graph& g : {petersen_graph(), complete_graph(5), barabasi_albert(24, 2, 2)}) {
        const auto sys = normalized(g);
        const auto pp = perron(NbMatrix(g));
        const auto x = x_of(g, {0, 1, 3});
        EXPECT_LE(alpha11_centrality(pp, x), lxr_norm(sys, x, NormOrder::two) + 1e-8);
    }
}

TEST(EpsilonApproximation, Values) {
    EXPECT_EQ(epsilon_approximation(0.0, 2.0), 0.0);
    EXPECT_EQ(epsilon_approximation(1.5, 2.0), 0.375);
    const auto a = analyze_addition(complete_graph(4), std::vector<NodeId>{1, 2});
    ASSERT_TRUE(a.eps_approx.has_value());
    EXPECT_NEAR(*a.eps_approx, 0.375, 1e-12);
    EXPECT_GT(std::abs(a.epsilon_c - *a.eps_approx), 0.0);  // reported, not asserted small
}

TEST(BoundReport, JsonFieldNames) {
    const auto a = analyze_addition(complete_graph(4), std::vector<NodeId>{1, 2});
    const auto* two = a.bound(NormOrder::two);
    ASSERT_NE(two, nullptr);
    const auto j = to_json(*two);
    for (const char* key : {"p", "lxr_norm", "gamma", "theorem2_bound", "x_degree", "alpha11", "eps_approx", "eps_actual",
                            "prop1_holds"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.size(), 9u);
    EXPECT_EQ(j["x_degree"], 18);
    EXPECT_EQ(j["p"], "2");
    EXPECT_TRUE(j["prop1_holds"].get<bool>());
}

TEST(Bounds, HoldOnSmallCorpus) {
    for (const Graph& g : {complete_graph(4), complete_graph(5), petersen_graph(), prune_two_core(erdos_renyi(30, 0.2, 12)),
                           barabasi_albert(30, 3, 7)}) {
        const auto base = prepare_base(g, AnalysisOptions{.curve_samples = 0});
        ASSERT_TRUE(base.eigensystem.has_value());
        for (std::vector<NodeId> nbrs : {std::vector<NodeId>{0, 1}, std::vector<NodeId>{1, 2, 3}, std::vector<NodeId>{0, 2, 3}}) {
            const auto a = analyze_addition(base, nbrs, AnalysisOptions{.curve_samples = 0});
            ASSERT_EQ(a.bounds.size(), 3u);
            for (const auto& b : a.bounds) {
                EXPECT_TRUE(b.bound_holds());
                EXPECT_TRUE(b.prop1_holds);
            }
        }
    }
}

TEST(Bounds, RelabelingInvariance) {
    const Graph g = prune_two_core(erdos_renyi(24, 0.22, 21));
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    SplitMix64 rng(5);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const Graph h = permute_nodes(g, perm);

    const std::vector<NodeId> nbrs{0, 3, 5};
    std::vector<NodeId> mapped;
    for (NodeId v : nbrs) mapped.push_back(perm[v]);
    const AnalysisOptions opts{.curve_samples = 0};
    const auto a = analyze_addition(g, nbrs, opts);
    const auto b = analyze_addition(h, mapped, opts);
    EXPECT_NEAR(a.lambda1, b.lambda1, 1e-8);
    EXPECT_NEAR(a.lambda_c, b.lambda_c, 1e-8);
    EXPECT_NEAR(*a.alpha11, *b.alpha11, 1e-8);
    EXPECT_EQ(a.x_degree, b.x_degree);
    ASSERT_EQ(a.bounds.size(), b.bounds.size());
    for (std::size_t i = 0; i < a.bounds.size(); ++i) {
        EXPECT_NEAR(a.bounds[i].gamma, b.bounds[i].gamma, 1e-8);
        EXPECT_NEAR(a.bounds[i].lxr_norm, b.bounds[i].lxr_norm, 1e-8 * std::max(1.0, a.bounds[i].lxr_norm));
        EXPECT_NEAR(a.bounds[i].theorem2_bound, b.bounds[i].theorem2_bound, 1e-8);
    }
}
