#pragma once

#include <vector>

namespace rcrl {

// Observation. Discrete environments additionally carry a dense state index
// used by tabular learners and the exact solvers.
struct StateVec {
    std::vector<double> values;
    int index = -1;
};

struct Action {
    int index = -1;                  // discrete environments
    std::vector<double> continuous;  // continuous environments
};

struct ActionSpec {
    enum class Kind { discrete, continuous };
    Kind kind = Kind::discrete;
    int n = 0;    // discrete: number of actions
    int dim = 0;  // continuous: action dimension
    std::vector<double> low, high;
};

// The per-step component vector an environment emits instead of a scalar
// reward. Scalar rewards are always recomputed from these.
struct RewardComponents {
    std::vector<double> c;
};

struct StepResult {
    StateVec next_state;
    RewardComponents components;
    bool done = false;
    bool truncated = false;
};

}  // namespace rcrl
