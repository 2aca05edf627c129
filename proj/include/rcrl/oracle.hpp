#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rcrl/env.hpp"
#include "rcrl/reward.hpp"

namespace rcrl {

// Exact action-value table for one parameterization of an enumerable
// environment, with the final Bellman residual recorded.
struct ExactQ {
    int n_states = 0, n_actions = 0;
    double gamma = 0.0;
    double residual = 0.0;
    std::vector<double> q;  // [s * n_actions + a]

    double at(int s, int a) const { return q[static_cast<std::size_t>(s) * n_actions + a]; }
    double max_value(int s) const;
    int greedy(int s) const;  // lowest index on ties
};

// Sup-norm fixed-point iteration on the Bellman optimality operator.
// Deterministic transitions make the result exact to `tol`.
ExactQ value_iteration(const Env& env, const Parameterization& p, double gamma,
                       double tol = 1e-10, int max_sweeps = 1000000);
ExactQ value_iteration_serial(const Env& env, const Parameterization& p, double gamma,
                              double tol = 1e-10, int max_sweeps = 1000000);

using Policy = std::function<Action(const StateVec&)>;

struct EvalResult {
    double mean = 0.0;
    std::vector<double> returns;
    double metric = 0.0;  // mean behavior_metric over all steps
};

// Undiscounted episode returns under compose(p, components). Episode seeds
// derive from `seed`, so results are reproducible.
EvalResult evaluate_policy(Env& env, const Policy& policy, const Parameterization& p,
                           int episodes, uint64_t seed);

struct CemConfig {
    int iterations = 60;
    int population = 128;
    int elites = 16;
    double init_std = 0.7;
    double min_std = 0.02;
    int horizon = -1;  // -1: the environment's horizon
};

// Best undiscounted return found by cross-entropy search over open-loop
// action sequences; the reference denominator for continuous environments.
double best_openloop_return(const Env& env, const Parameterization& p, const CemConfig& cfg,
                            uint64_t seed);

}  // namespace rcrl
