#include "rcrl/env.hpp"

#include <cmath>
#include <stdexcept>

#include "rcrl/rng.hpp"

namespace rcrl {

double tolerance(double x, double target, double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("tolerance: margin must be positive");
    return std::max(0.0, 1.0 - std::abs(x - target) / margin);
}

StateVec Env::reset(uint64_t seed) {
    state_ = initial_state(seed);
    steps_ = 0;
    return state_;
}

StepResult Env::step(const Action& a) {
    StepResult r = transition(state_, a);
    ++steps_;
    if (!r.done && steps_ >= descriptor().horizon) r.truncated = true;
    state_ = r.next_state;
    return r;
}

int Env::state_count() const {
    throw std::logic_error(descriptor().name + ": continuous environment");
}

StateVec Env::decode_state(int) const {
    throw std::logic_error(descriptor().name + ": continuous environment");
}

void Env::validate_action(const Action& a) const {
    const ActionSpec& spec = descriptor().action_spec;
    if (spec.kind == ActionSpec::Kind::discrete) {
        if (a.index < 0 || a.index >= spec.n)
            throw std::out_of_range(descriptor().name + ": action index out of range");
        return;
    }
    if (static_cast<int>(a.continuous.size()) != spec.dim)
        throw std::out_of_range(descriptor().name + ": action dimension mismatch");
    for (int d = 0; d < spec.dim; ++d)
        if (a.continuous[d] < spec.low[d] || a.continuous[d] > spec.high[d])
            throw std::out_of_range(descriptor().name + ": action out of bounds");
}

namespace {

// ---------------------------------------------------------------------------
// grid-zone: 5x5 grid, actions {up, down, left, right, stay}. Components:
// goal proximity exp(-manhattan/2), action energy (1 for stay, else 0.5),
// zone occupancy (1 on rows 1 and 3, else 0.2). Start (0,0), goal (4,4).
// ---------------------------------------------------------------------------
class GridZoneEnv final : public Env {
public:
    static constexpr int kSide = 5;
    static constexpr int kGoalRow = 4, kGoalCol = 4;

    GridZoneEnv() {
        desc_.name = "grid-zone";
        desc_.state_dim = 2;
        desc_.action_spec.kind = ActionSpec::Kind::discrete;
        desc_.action_spec.n = 5;
        desc_.component_count = 3;
        desc_.nominal.psi = {1.0, 0.1, 0.3};
        desc_.nominal.composition = Composition::linear;
        desc_.horizon = 50;
        desc_.discrete = true;
    }

    const EnvDescriptor& descriptor() const override { return desc_; }

    int state_count() const override { return kSide * kSide; }

    StateVec decode_state(int index) const override {
        StateVec s;
        s.index = index;
        s.values = {static_cast<double>(index / kSide), static_cast<double>(index % kSide)};
        return s;
    }

    StepResult transition(const StateVec& s, const Action& a) const override {
        validate_action(a);
        int row = s.index / kSide, col = s.index % kSide;
        switch (a.index) {
            case 0: row = std::max(0, row - 1); break;
            case 1: row = std::min(kSide - 1, row + 1); break;
            case 2: col = std::max(0, col - 1); break;
            case 3: col = std::min(kSide - 1, col + 1); break;
            default: break;  // stay
        }
        const int cur_row = s.index / kSide, cur_col = s.index % kSide;
        const int dist = std::abs(cur_row - kGoalRow) + std::abs(cur_col - kGoalCol);

        StepResult r;
        r.next_state = decode_state(row * kSide + col);
        r.components.c = {std::exp(-dist / 2.0), a.index == 4 ? 1.0 : 0.5,
                          (cur_row == 1 || cur_row == 3) ? 1.0 : 0.2};
        return r;
    }

protected:
    StateVec initial_state(uint64_t) const override { return decode_state(0); }

private:
    EnvDescriptor desc_;
};

// ---------------------------------------------------------------------------
// speed-chain: ring of 8 positions with velocity in {0..3}, actions
// {decel, hold, accel}. Component t is tolerance(v', t, 1), one per target
// speed, so integer velocities make the components one-hot in the realized
// velocity. The nominal selects target 3.
// ---------------------------------------------------------------------------
class SpeedChainEnv final : public Env {
public:
    static constexpr int kPositions = 8;
    static constexpr int kVelocities = 4;

    SpeedChainEnv() {
        desc_.name = "speed-chain";
        desc_.state_dim = 2;
        desc_.action_spec.kind = ActionSpec::Kind::discrete;
        desc_.action_spec.n = 3;
        desc_.component_count = kVelocities;
        desc_.nominal.psi = {0.0, 0.0, 0.0, 1.0};
        desc_.nominal.composition = Composition::linear;
        desc_.horizon = 40;
        desc_.discrete = true;
    }

    const EnvDescriptor& descriptor() const override { return desc_; }

    int state_count() const override { return kPositions * kVelocities; }

    StateVec decode_state(int index) const override {
        StateVec s;
        s.index = index;
        s.values = {static_cast<double>(index / kVelocities),
                    static_cast<double>(index % kVelocities)};
        return s;
    }

    StepResult transition(const StateVec& s, const Action& a) const override {
        validate_action(a);
        const int pos = s.index / kVelocities, vel = s.index % kVelocities;
        const int next_v = std::clamp(vel + a.index - 1, 0, kVelocities - 1);
        const int next_pos = (pos + next_v) % kPositions;

        StepResult r;
        r.next_state = decode_state(next_pos * kVelocities + next_v);
        r.components.c.resize(kVelocities);
        for (int t = 0; t < kVelocities; ++t)
            r.components.c[t] = tolerance(static_cast<double>(next_v), static_cast<double>(t), 1.0);
        return r;
    }

protected:
    StateVec initial_state(uint64_t) const override { return decode_state(0); }

private:
    EnvDescriptor desc_;
};

// ---------------------------------------------------------------------------
// point-mass: planar position/velocity with force actions in [-1,1]^2.
// x' = x + 0.05 v, v' = 0.95 v + 0.1 a. Components: forward progress
// clamp(vx, 0, 1) and control economy 1 - |a|^2 / 2. Start position is
// seeded uniform in [-0.1, 0.1]^2 with zero velocity.
// ---------------------------------------------------------------------------
class PointMassEnv final : public Env {
public:
    PointMassEnv() {
        desc_.name = "point-mass";
        desc_.state_dim = 4;
        desc_.action_spec.kind = ActionSpec::Kind::continuous;
        desc_.action_spec.dim = 2;
        desc_.action_spec.low = {-1.0, -1.0};
        desc_.action_spec.high = {1.0, 1.0};
        desc_.component_count = 2;
        desc_.nominal.psi = {1.0, 0.25};
        desc_.nominal.composition = Composition::linear;
        desc_.horizon = 200;
        desc_.discrete = false;
    }

    const EnvDescriptor& descriptor() const override { return desc_; }

    StepResult transition(const StateVec& s, const Action& a) const override {
        validate_action(a);
        const double px = s.values[0], py = s.values[1];
        const double vx = s.values[2], vy = s.values[3];
        const double ax = a.continuous[0], ay = a.continuous[1];

        StepResult r;
        r.next_state.values = {px + 0.05 * vx, py + 0.05 * vy, 0.95 * vx + 0.1 * ax,
                               0.95 * vy + 0.1 * ay};
        const double a2 = ax * ax + ay * ay;
        r.components.c = {std::clamp(vx, 0.0, 1.0), 1.0 - a2 / 2.0};
        return r;
    }

protected:
    StateVec initial_state(uint64_t seed) const override {
        Rng rng(seed, streams::episode);
        StateVec s;
        s.values = {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), 0.0, 0.0};
        return s;
    }

private:
    EnvDescriptor desc_;
};

}  // namespace

std::unique_ptr<Env> make_env(const std::string& name) {
    if (name == "grid-zone") return std::make_unique<GridZoneEnv>();
    if (name == "speed-chain") return std::make_unique<SpeedChainEnv>();
    if (name == "point-mass") return std::make_unique<PointMassEnv>();
    throw std::invalid_argument("unknown environment: " + name);
}

std::vector<std::string> env_names() { return {"grid-zone", "speed-chain", "point-mass"}; }

std::vector<std::pair<StateVec, int>> enumerate(const Env& env) {
    if (!env.descriptor().discrete)
        throw std::invalid_argument(env.descriptor().name + ": continuous environment");
    std::vector<std::pair<StateVec, int>> pairs;
    const int n_states = env.state_count();
    const int n_actions = env.descriptor().action_spec.n;
    pairs.reserve(static_cast<std::size_t>(n_states) * n_actions);
    for (int s = 0; s < n_states; ++s)
        for (int a = 0; a < n_actions; ++a) pairs.emplace_back(env.decode_state(s), a);
    return pairs;
}

double behavior_metric(const Env& env, const StateVec& next_state, const Action& a) {
    const std::string& name = env.descriptor().name;
    if (name == "speed-chain") return next_state.values[1];  // realized velocity
    if (name == "point-mass") {
        double a2 = 0.0;
        for (double v : a.continuous) a2 += v * v;
        return std::sqrt(a2);
    }
    if (name == "grid-zone")
        return std::abs(next_state.values[0] - 4.0) + std::abs(next_state.values[1] - 4.0);
    return 0.0;
}

}  // namespace rcrl
