#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rcrl/reward.hpp"
#include "rcrl/types.hpp"

namespace rcrl {

struct EnvDescriptor {
    std::string name;
    int state_dim = 0;
    ActionSpec action_spec;
    int component_count = 0;
    Parameterization nominal;
    int horizon = 0;
    bool discrete = true;
};

// Piecewise-linear unimodal bump: 1 at x == target, 0 beyond margin.
double tolerance(double x, double target, double margin);

// An environment emits reward components, never scalar rewards. Transitions
// are deterministic functions of (state, action); episode randomness enters
// only through the seeded initial state. Instances are single-owner: the
// reset/step interface keeps the episode cursor, while transition() is the
// pure dynamics usable from any thread.
class Env {
public:
    virtual ~Env() = default;

    virtual const EnvDescriptor& descriptor() const = 0;

    StateVec reset(uint64_t seed);
    StepResult step(const Action& a);

    virtual StepResult transition(const StateVec& s, const Action& a) const = 0;

    // Discrete-state support; throws for continuous environments.
    virtual int state_count() const;
    virtual StateVec decode_state(int index) const;

    const StateVec& state() const { return state_; }

protected:
    virtual StateVec initial_state(uint64_t seed) const = 0;
    void validate_action(const Action& a) const;

private:
    StateVec state_;
    int steps_ = 0;
};

std::unique_ptr<Env> make_env(const std::string& name);
std::vector<std::string> env_names();

// Complete state-action enumeration of a discrete environment, row-major in
// the state index, ascending in the action index.
std::vector<std::pair<StateVec, int>> enumerate(const Env& env);

// Behavioral probe used by the zero-shot sweeps: a scalar summary of one
// step (realized velocity for speed-chain, action magnitude for point-mass).
double behavior_metric(const Env& env, const StateVec& next_state, const Action& a);

}  // namespace rcrl
