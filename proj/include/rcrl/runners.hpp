#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rcrl/harness.hpp"
#include "rcrl/oracle.hpp"

namespace rcrl {

// A trained learner together with everything needed to evaluate, steer and
// finetune it: the resolved config, the parameterization pool, the mixture
// law and the per-id normalizer statistics.
struct TrainedAgent {
    ExperimentConfig cfg;
    uint64_t seed = 0;
    long steps_trained = 0;
    std::vector<Parameterization> pool;
    MixtureConfig mixture;
    std::optional<TabularQ> tabular;
    std::optional<ActorCriticAgent> ac;
    RewardNormalizer normalizer;

    Action act(const StateVec& s, const Parameterization& p, bool explore, Rng& rng) const;
};

struct TrainResult {
    RunLog log;
    TrainedAgent agent;
};

// Builds the pool + mixture for a config against an environment.
MixtureConfig build_mixture(Env& env, const ExperimentConfig& cfg);

// Normalization anchors: random = uniform-random policy return, optimal =
// greedy-on-exact-Q return for enumerable environments, best open-loop
// return found by cross-entropy search otherwise.
ScoreNorm compute_score_norm(const Env& env, const Parameterization& p);

// The core loop: act under the nominal parameterization (or one resampled
// per episode when explore_conditioned), store components, then per update
// sample a batch, draw ids from the mixture, relabel and apply conditioned
// updates. Periodic greedy evaluation under the nominal is logged.
TrainResult run_training(const ExperimentConfig& cfg, uint64_t seed,
                         const ScoreNorm* norm = nullptr);

// Plain single-task reference trainer (no pool, no mixture, no relabeling
// machinery); used to check that alpha = 1 with conditioning disabled
// reduces to it bitwise. Tabular only.
TrainResult run_training_baseline(const ExperimentConfig& cfg, uint64_t seed,
                                  const ScoreNorm* norm = nullptr);

// All configured seeds, independent cells joined in seed order.
std::vector<TrainResult> run_training_all_seeds(const ExperimentConfig& cfg);

struct ZeroShotRow {
    int id = 0;
    double metric = 0.0;       // realized behavior summary
    double mean_return = 0.0;  // under compose(pool[id], .)
    double normalized = 0.0;
};

// Evaluates the trained agent once per pool entry (or per entry of `subset`
// when given), switching only the conditioning. No parameter updates happen.
std::vector<ZeroShotRow> run_zero_shot_sweep(const TrainedAgent& agent, int episodes,
                                             uint64_t eval_seed,
                                             const std::vector<int>* subset = nullptr);

struct TransferResult {
    RunLog log;
    double final_return = 0.0;
    double final_score = 0.0;
    TrainedAgent agent;
};

// Loads the source learner, switches conditioning (and the nominal) to the
// target task, reinitializes optimizer state and resumes training under the
// target reward, exploring from the transferred policy. Relabeling against
// the rest of the pool continues unless keep_relabeling is false.
TransferResult run_finetune_transfer(const TrainedAgent& source, int target_id, long steps,
                                     bool keep_relabeling = true);

struct DecompositionResult {
    // regimes: st, st_rcrl, st_expanded, mt
    std::map<std::string, RunLog> logs;
    std::map<std::string, double> final_scores;
};

// Coverage/supervision decomposition: single-task, single-task with
// counterfactual relabeling, single-task with expanded collection, and full
// multi-task. Expanded and multi-task collect n_tasks times more steps.
DecompositionResult run_decomposition(const ExperimentConfig& base, uint64_t seed);

// Checkpoint I/O (JSON; layout documented in README).
void save_checkpoint(const std::string& path, const TrainedAgent& agent);
TrainedAgent load_checkpoint(const std::string& path);

}  // namespace rcrl
