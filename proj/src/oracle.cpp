#include "rcrl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rcrl {

double ExactQ::max_value(int s) const {
    double best = at(s, 0);
    for (int a = 1; a < n_actions; ++a) best = std::max(best, at(s, a));
    return best;
}

int ExactQ::greedy(int s) const {
    int best = 0;
    double best_v = at(s, 0);
    for (int a = 1; a < n_actions; ++a)
        if (at(s, a) > best_v) {
            best_v = at(s, a);
            best = a;
        }
    return best;
}

namespace {

struct Model {
    int n_states, n_actions;
    std::vector<int> next;
    std::vector<double> reward;
    std::vector<unsigned char> done;
};

Model build_model(const Env& env, const Parameterization& p) {
    if (!env.descriptor().discrete)
        throw std::invalid_argument("value iteration requires a discrete environment");
    Model m;
    m.n_states = env.state_count();
    m.n_actions = env.descriptor().action_spec.n;
    const std::size_t total = static_cast<std::size_t>(m.n_states) * m.n_actions;
    m.next.resize(total);
    m.reward.resize(total);
    m.done.resize(total);
    for (int s = 0; s < m.n_states; ++s) {
        const StateVec sv = env.decode_state(s);
        for (int a = 0; a < m.n_actions; ++a) {
            Action act;
            act.index = a;
            const StepResult r = env.transition(sv, act);
            const std::size_t o = static_cast<std::size_t>(s) * m.n_actions + a;
            m.next[o] = r.next_state.index;
            m.reward[o] = compose(p, r.components);
            m.done[o] = r.done ? 1 : 0;
        }
    }
    return m;
}

template <bool Parallel>
ExactQ vi_impl(const Env& env, const Parameterization& p, double gamma, double tol,
               int max_sweeps) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("value iteration: gamma must lie in (0, 1)");
    const Model m = build_model(env, p);

    ExactQ result;
    result.n_states = m.n_states;
    result.n_actions = m.n_actions;
    result.gamma = gamma;
    result.q.assign(m.next.size(), 0.0);

    std::vector<double> q_new(m.next.size());
    std::vector<double> vmax(m.n_states);
    double residual = std::numeric_limits<double>::infinity();

    for (int sweep = 0; sweep < max_sweeps && residual >= tol; ++sweep) {
        residual = 0.0;
#pragma omp parallel for schedule(static) if (Parallel)
        for (int s = 0; s < m.n_states; ++s) {
            double best = result.q[static_cast<std::size_t>(s) * m.n_actions];
            for (int a = 1; a < m.n_actions; ++a)
                best = std::max(best, result.q[static_cast<std::size_t>(s) * m.n_actions + a]);
            vmax[s] = best;
        }
#pragma omp parallel for schedule(static) reduction(max : residual) if (Parallel)
        for (int s = 0; s < m.n_states; ++s) {
            for (int a = 0; a < m.n_actions; ++a) {
                const std::size_t o = static_cast<std::size_t>(s) * m.n_actions + a;
                const double backed =
                    m.reward[o] + (m.done[o] ? 0.0 : gamma * vmax[m.next[o]]);
                residual = std::max(residual, std::abs(backed - result.q[o]));
                q_new[o] = backed;
            }
        }
        result.q.swap(q_new);
    }
    result.residual = residual;
    return result;
}

}  // namespace

ExactQ value_iteration(const Env& env, const Parameterization& p, double gamma, double tol,
                       int max_sweeps) {
    return vi_impl<true>(env, p, gamma, tol, max_sweeps);
}

ExactQ value_iteration_serial(const Env& env, const Parameterization& p, double gamma, double tol,
                              int max_sweeps) {
    return vi_impl<false>(env, p, gamma, tol, max_sweeps);
}

EvalResult evaluate_policy(Env& env, const Policy& policy, const Parameterization& p,
                           int episodes, uint64_t seed) {
    if (episodes < 1) throw std::invalid_argument("evaluate_policy: episodes must be >= 1");
    EvalResult res;
    res.returns.reserve(episodes);
    double metric_sum = 0.0;
    long metric_count = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        StateVec s = env.reset(Rng::mix(seed, ep));
        double ret = 0.0;
        for (;;) {
            const Action a = policy(s);
            const StepResult r = env.step(a);
            ret += compose(p, r.components);
            metric_sum += behavior_metric(env, r.next_state, a);
            ++metric_count;
            if (r.done || r.truncated) break;
            s = r.next_state;
        }
        res.returns.push_back(ret);
    }
    res.mean = std::accumulate(res.returns.begin(), res.returns.end(), 0.0) / episodes;
    res.metric = metric_count ? metric_sum / metric_count : 0.0;
    return res;
}

double best_openloop_return(const Env& env, const Parameterization& p, const CemConfig& cfg,
                            uint64_t seed) {
    const EnvDescriptor& desc = env.descriptor();
    if (desc.action_spec.kind != ActionSpec::Kind::continuous)
        throw std::invalid_argument("open-loop search requires a continuous environment");
    const int horizon = cfg.horizon >= 0 ? cfg.horizon : desc.horizon;
    if (horizon == 0) return 0.0;

    const int dim = desc.action_spec.dim;
    const int n = horizon * dim;
    const auto& lo = desc.action_spec.low;
    const auto& hi = desc.action_spec.high;

    auto start_env = make_env(desc.name);
    const StateVec start = start_env->reset(Rng::mix(seed, 0));

    std::vector<double> mean(n, 0.0), stddev(n, cfg.init_std);
    Rng rng(seed, streams::init);
    double best = -std::numeric_limits<double>::infinity();

    std::vector<double> samples(static_cast<std::size_t>(cfg.population) * n);
    std::vector<double> returns(cfg.population);
    std::vector<int> order(cfg.population);

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        for (int m = 0; m < cfg.population; ++m)
            for (int i = 0; i < n; ++i)
                samples[static_cast<std::size_t>(m) * n + i] =
                    std::clamp(mean[i] + stddev[i] * rng.normal(), lo[i % dim], hi[i % dim]);

#pragma omp parallel for schedule(static)
        for (int m = 0; m < cfg.population; ++m) {
            const double* plan = &samples[static_cast<std::size_t>(m) * n];
            StateVec s = start;
            double ret = 0.0;
            Action a;
            a.continuous.resize(dim);
            for (int t = 0; t < horizon; ++t) {
                for (int d = 0; d < dim; ++d) a.continuous[d] = plan[t * dim + d];
                const StepResult r = env.transition(s, a);
                ret += compose(p, r.components);
                s = r.next_state;
            }
            returns[m] = ret;
        }

        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (returns[a] != returns[b]) return returns[a] > returns[b];
            return a < b;
        });
        best = std::max(best, returns[order[0]]);

        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int e = 0; e < cfg.elites; ++e)
                acc += samples[static_cast<std::size_t>(order[e]) * n + i];
            const double mu = acc / cfg.elites;
            double var = 0.0;
            for (int e = 0; e < cfg.elites; ++e) {
                const double d = samples[static_cast<std::size_t>(order[e]) * n + i] - mu;
                var += d * d;
            }
            mean[i] = mu;
            stddev[i] = std::max(cfg.min_std, std::sqrt(var / cfg.elites));
        }
    }
    return best;
}

}  // namespace rcrl
