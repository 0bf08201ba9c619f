#include <gtest/gtest.h>

#include <vector>

#include "nbspec/nbspec.hpp"

using namespace nbspec;

namespace {

std::vector<double> linspace_open(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 1; i <= n; ++i) out.push_back(a + (b - a) * i / (n + 1));
    return out;
}

}  // namespace

TEST(CountWalks, PathHasNoLongWalks) {
    const Graph g = path_graph(3);  // 0 - 1 - 2
    for (NodeId a = 0; a < 3; ++a)
        for (NodeId b : g.neighbors(a))
            for (NodeId c = 0; c < 3; ++c)
                for (NodeId d : g.neighbors(c)) EXPECT_EQ(oracle::count_nb_walks(g, {{a, b}, {c, d}, 3}), 0u);
    EXPECT_EQ(oracle::count_nb_walks(g, {{0, 1}, {1, 2}, 2}), 1u);
    EXPECT_EQ(oracle::count_nb_walks(g, {{0, 1}, {1, 0}, 2}), 0u);
}

TEST(CountWalks, CycleLoop) {
    const Graph g = cycle_graph(4);
    EXPECT_EQ(oracle::count_nb_walks(g, {{0, 1}, {0, 1}, 5}), 1u);
    EXPECT_EQ(oracle::count_nb_walks(g, {{0, 1}, {1, 0}, 5}), 0u);
    EXPECT_EQ(oracle::count_nb_walks(g, {{0, 1}, {0, 1}, 1}), 1u);
}

TEST(CountWalks, CompleteGraphTotals) {
    const Graph g = complete_graph(4);
    const auto b = NbMatrix(g).integer();
    oracle::IntMat power = oracle::IntMat::Identity(12, 12);
    for (std::size_t r = 1; r <= 5; ++r) {
        power = power * b;
        const auto counts = oracle::walk_count_matrix(g, r + 1);
        EXPECT_EQ(counts.sum(), power.sum());
        // 12 starts, each with 2^r continuations
        EXPECT_EQ(counts.sum(), 12 * (std::int64_t{1} << r));
    }
}

TEST(CountWalks, Budget) {
    const Graph g = complete_graph(12);
    EXPECT_THROW(oracle::count_nb_walks(g, {{0, 1}, {2, 3}, 10}), BudgetExceeded);
    EXPECT_THROW(oracle::count_nb_walks(g, {{0, 1}, {2, 3}, 0}), DomainError);
}

TEST(VerifyWalkPowers, SmallGraphs) {
    EXPECT_TRUE(oracle::verify_walk_powers(complete_graph(4), NbMatrix(complete_graph(4)).integer(), 4).pass);
    EXPECT_TRUE(oracle::verify_walk_powers(cycle_graph(4), NbMatrix(cycle_graph(4)).integer(), 4).pass);
    EXPECT_TRUE(oracle::verify_walk_powers(path_graph(3), NbMatrix(path_graph(3)).integer(), 3).pass);
    EXPECT_TRUE(oracle::verify_walk_powers(petersen_graph(), NbMatrix(petersen_graph()).integer(), 5).pass);
}

TEST(VerifyWalkPowers, DetectsCorruption) {
    auto b = NbMatrix(complete_graph(4)).integer();
    b(0, 5) = 1 - b(0, 5);
    const auto r = oracle::verify_walk_powers(complete_graph(4), b, 2);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.mismatches, 0u);
}

TEST(VerifyWalkPowers, Preconditions) {
    EXPECT_THROW(oracle::verify_walk_powers(complete_graph(9), NbMatrix(complete_graph(9)).integer(), 2), DomainError);
    EXPECT_THROW(oracle::verify_walk_powers(complete_graph(4), NbMatrix(complete_graph(4)).integer(), 6), DomainError);
}

TEST(VerifySchur, CompleteGraph) {
    const auto ts = linspace_open(2.1, 5.0, 10);
    const auto r = oracle::verify_schur(complete_graph(4), std::vector<NodeId>{1, 2}, ts);
    EXPECT_EQ(r.used, 10u);
    EXPECT_LE(r.max_residual, 1e-8);
    const auto r1 = oracle::verify_schur(complete_graph(4), std::vector<NodeId>{1}, ts);
    EXPECT_LE(r1.max_residual, 1e-8);
}

TEST(VerifySchur, CycleAdjacentPair) {
    const auto r = oracle::verify_schur(cycle_graph(4), std::vector<NodeId>{0, 1}, linspace_open(2.1, 5.0, 10));
    EXPECT_EQ(r.used, 10u);
    EXPECT_LE(r.max_residual, 1e-8);
}

TEST(VerifySchur, SkipsEigenvalues) {
    const auto r = oracle::verify_schur(complete_graph(4), std::vector<NodeId>{1, 2}, {2.0, 0.0, 3.0});
    EXPECT_TRUE(r.samples[0].skipped);
    EXPECT_TRUE(r.samples[1].skipped);
    EXPECT_FALSE(r.samples[2].skipped);
    EXPECT_EQ(r.used, 1u);
}

TEST(VerifySchur, DetectsWrongX) {
    // Replacing X by the all-ones matrix breaks the identity.
    const Graph g = complete_graph(4);
    const Eigen::MatrixXd x = oracle::x_matrix(g, std::vector<NodeId>{1, 2});
    EXPECT_EQ(x.sum(), 18.0);
    EXPECT_EQ(x, x_from_formula(g, std::vector<NodeId>{1, 2}).cast<double>());
}

TEST(Takagi, Identity) {
    const auto r = oracle::verify_takagi_identity(Eigen::MatrixXcd::Identity(5, 5));
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.singular_value, 1.0, 1e-12);
    EXPECT_NEAR(r.ascent_max, 1.0, 1e-9);
}

TEST(Takagi, Diagonal) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = Complex(0.0, 1.0);
    const auto r = oracle::verify_takagi_identity(m);
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.singular_value, 2.0, 1e-12);
    EXPECT_NEAR(r.ascent_max, 2.0, 1e-9);
}

TEST(Takagi, LxrOfCompleteGraph) {
    const Graph g = complete_graph(4);
    const auto sys = p_normalize(full_eigensystem(NbMatrix(g)), build_reversal(g));
    const auto lxr = lxr_matrix(sys, x_from_formula(g, std::vector<NodeId>{1, 2}).cast<double>());
    const auto r = oracle::verify_takagi_identity(lxr);
    EXPECT_TRUE(r.pass) << r.singular_value << " vs " << r.ascent_max;
}

TEST(Takagi, RandomSymmetric) {
    SplitMix64 rng(3);
    Eigen::MatrixXcd m(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = Complex(rng.normal(), rng.normal());
    EXPECT_TRUE(oracle::verify_takagi_identity(m).pass);
}

TEST(Takagi, Rejections) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(oracle::verify_takagi_identity(m), DomainError);
    EXPECT_THROW(oracle::verify_takagi_identity(Eigen::MatrixXcd::Identity(41, 41)), DomainError);
}
