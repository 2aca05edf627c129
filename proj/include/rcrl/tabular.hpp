#pragma once

#include <cstdint>
#include <vector>

#include "rcrl/env.hpp"
#include "rcrl/replay.hpp"
#include "rcrl/rng.hpp"

namespace rcrl {

// Q-learning over (state, action, parameterization id). With conditioning
// disabled the table collapses to a single slice shared by every id. The
// learning rate is lr / n^lr_power with n the per-entry update count;
// lr_power 0 gives a constant rate (exact asynchronous backups on
// deterministic rewards), positive powers average stochastic relabeled
// rewards.
class TabularQ {
public:
    struct Config {
        double gamma = 0.9;
        double lr = 1.0;
        double lr_power = 0.0;
        double epsilon = 0.2;
        bool conditioned = true;
    };

    TabularQ(const Env& env, int n_params, Config cfg);

    int n_states() const { return n_states_; }
    int n_actions() const { return n_actions_; }
    int n_slices() const { return n_params_; }
    const Config& config() const { return cfg_; }

    double q(int s, int a, int id) const { return q_[offset(s, a, id)]; }
    double max_q(int s, int id) const;
    // greedy action, ties broken toward the lowest action index
    int greedy(int s, int id) const;

    Action act(const StateVec& s, int id, bool explore, Rng& rng) const;

    // One Bellman backup on (t.state, t.action) under parameterization `id`
    // with relabeled reward r. Slices of other ids are untouched.
    void update(const Transition& t, int id, double r);

    void reset_lr_state();  // clears per-entry update counts

    std::vector<double>& table() { return q_; }
    const std::vector<double>& table() const { return q_; }
    const std::vector<uint32_t>& visits() const { return visits_; }

private:
    std::size_t offset(int s, int a, int id) const;
    int slice(int id) const { return cfg_.conditioned ? id : 0; }

    int n_states_, n_actions_, n_params_;
    Config cfg_;
    std::vector<double> q_;
    std::vector<uint32_t> visits_;
};

}  // namespace rcrl
