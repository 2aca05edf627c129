#include "rcrl/tabular.hpp"

#include <cmath>
#include <stdexcept>

namespace rcrl {

TabularQ::TabularQ(const Env& env, int n_params, Config cfg)
    : n_states_(0), n_actions_(0), n_params_(cfg.conditioned ? n_params : 1), cfg_(cfg) {
    if (!env.descriptor().discrete)
        throw std::invalid_argument("tabular learner requires a discrete environment");
    if (n_params < 1) throw std::invalid_argument("tabular learner needs at least one slice");
    n_states_ = env.state_count();
    n_actions_ = env.descriptor().action_spec.n;
    const std::size_t total =
        static_cast<std::size_t>(n_states_) * n_actions_ * n_params_;
    q_.assign(total, 0.0);
    visits_.assign(total, 0);
}

std::size_t TabularQ::offset(int s, int a, int id) const {
    return (static_cast<std::size_t>(s) * n_actions_ + a) * n_params_ + slice(id);
}

double TabularQ::max_q(int s, int id) const {
    double best = q(s, 0, id);
    for (int a = 1; a < n_actions_; ++a) best = std::max(best, q(s, a, id));
    return best;
}

int TabularQ::greedy(int s, int id) const {
    int best = 0;
    double best_v = q(s, 0, id);
    for (int a = 1; a < n_actions_; ++a) {
        const double v = q(s, a, id);
        if (v > best_v) {
            best_v = v;
            best = a;
        }
    }
    return best;
}

Action TabularQ::act(const StateVec& s, int id, bool explore, Rng& rng) const {
    Action a;
    if (explore && rng.uniform() < cfg_.epsilon)
        a.index = rng.uniform_int(n_actions_);
    else
        a.index = greedy(s.index, id);
    return a;
}

void TabularQ::update(const Transition& t, int id, double r) {
    if (t.state.index < 0 || t.next_state.index < 0)
        throw std::invalid_argument("tabular update on a continuous state");
    const std::size_t o = offset(t.state.index, t.action.index, id);
    const double bootstrap = t.done ? 0.0 : cfg_.gamma * max_q(t.next_state.index, id);
    const uint32_t n = ++visits_[o];
    const double lr =
        cfg_.lr_power == 0.0 ? cfg_.lr : cfg_.lr / std::pow(static_cast<double>(n), cfg_.lr_power);
    q_[o] += lr * (r + bootstrap - q_[o]);
}

void TabularQ::reset_lr_state() { std::fill(visits_.begin(), visits_.end(), 0); }

}  // namespace rcrl
