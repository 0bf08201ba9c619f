#pragma once

// Random graph ensembles and the attachment sweep used by the CLI.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "perturb.hpp"
#include "rng.hpp"

namespace nbspec {

/// Pruned Erdos-Renyi graph: the largest component of the 2-core of
/// G(n, p). Draws are repeated with derived seeds until the result has at
/// least `min_nodes` nodes and is not a cycle.
inline Graph sample_er_core(std::size_t n, double p, std::uint64_t seed, std::size_t min_nodes = 5,
                            std::size_t max_attempts = 1000) {
    for (std::size_t k = 0; k < max_attempts; ++k) {
        Graph g = prune_two_core(erdos_renyi(n, p, derive_seed(seed, k)));
        if (g.node_count() >= min_nodes && validate(g).perron_applicable) return g;
    }
    throw DomainError("no usable pruned G(n, p) sample; p too small?");
}

/// d distinct node positions, sorted.
inline std::vector<NodeId> random_attachment(const Graph& g, std::size_t d, SplitMix64& rng) {
    const std::size_t n = g.node_count();
    if (d == 0 || d > n) throw DomainError("attachment degree must lie in [1, n]");
    std::vector<NodeId> pool(n);
    for (NodeId i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < d; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
    pool.resize(d);
    std::sort(pool.begin(), pool.end());
    return pool;
}

struct SweepSpec {
    std::size_t n = 30;
    double p = 0.25;
    std::size_t trials = 10;
    std::size_t attach_degree = 3;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    Tolerances tol{};
};

struct SweepRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<NodeId> neighbors;
    double lambda1 = 0.0;
    double lambda_c = 0.0;
    double eps = 0.0;
    double alpha11_scaled = 0.0;  // alpha11 / lambda1^2
    double abs_error = 0.0;       // |eps - alpha11 / lambda1^2|
    double rel_error = 0.0;       // abs_error / eps, 0 when eps = 0
    double gamma = std::nan("");
    double lxr_norm2 = std::nan("");
    double bound1 = std::nan("");
    double bound2 = std::nan("");
    double bound_inf = std::nan("");
    bool bounds_hold = false;
};

inline SweepRow run_sweep_trial(const SweepSpec& spec, std::size_t trial) {
    SweepRow row;
    row.trial = trial;
    row.seed = derive_seed(spec.seed, trial);
    const Graph g = sample_er_core(spec.n, spec.p, row.seed);
    SplitMix64 rng(derive_seed(row.seed, 0xa77ac4));
    row.n = g.node_count();
    row.m = g.edge_count();
    row.neighbors = random_attachment(g, std::min(spec.attach_degree, g.node_count()), rng);

    AnalysisOptions opts;
    opts.tol = spec.tol;
    opts.curve_samples = 0;
    const AdditionAnalysis a = analyze_addition(g, row.neighbors, opts);
    row.lambda1 = a.lambda1;
    row.lambda_c = a.lambda_c;
    row.eps = a.epsilon_c;
    row.alpha11_scaled = a.eps_approx.value_or(0.0);
    row.abs_error = std::abs(row.eps - row.alpha11_scaled);
    row.rel_error = row.eps > 0.0 ? row.abs_error / row.eps : 0.0;
    row.bounds_hold = !a.bounds.empty();
    for (const auto& b : a.bounds) {
        row.bounds_hold = row.bounds_hold && b.bound_holds();
        row.gamma = b.gamma;
        switch (b.p) {
            case NormOrder::one: row.bound1 = b.theorem2_bound; break;
            case NormOrder::two:
                row.bound2 = b.theorem2_bound;
                row.lxr_norm2 = b.lxr_norm;
                break;
            case NormOrder::infinity: row.bound_inf = b.theorem2_bound; break;
        }
    }
    return row;
}

/// Rows are ordered by trial index whatever the number of worker threads.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows(spec.trials);
    const std::size_t jobs = std::max<std::size_t>(1, std::min(spec.jobs, spec.trials));
    if (jobs == 1) {
        for (std::size_t i = 0; i < spec.trials; ++i) rows[i] = run_sweep_trial(spec, i);
        return rows;
    }
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < spec.trials; i += jobs) rows[i] = run_sweep_trial(spec, i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace nbspec
