#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcrl/actor_critic.hpp"
#include "rcrl/reward.hpp"
#include "rcrl/rng.hpp"
#include "rcrl/tabular.hpp"

namespace rcrl {

// Configuration errors carry the offending field name; the CLI reports the
// message and exits with status 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class AgentKind { tabular, actor_critic };

struct PoolSpecConfig {
    enum class Kind { arc, prc, continuous };
    Kind kind = Kind::arc;
    int n = 1024;  // prc pool size
    PerturbSpec perturb;
};

struct MixtureSpecConfig {
    double alpha = 0.5;
    PoolSpecConfig pool;
};

struct AgentSpecConfig {
    AgentKind kind = AgentKind::tabular;
    ConditioningMode conditioning = ConditioningMode::embedding;
    // shared
    double gamma = 0.9;
    int batch = 32;
    int update_every = 1;
    int warmup = 100;
    // tabular
    double lr = 1.0;
    double lr_power = 0.0;
    double epsilon = 0.2;
    // actor-critic
    ActorCriticConfig ac;
};

struct ExperimentConfig {
    std::string env;
    AgentSpecConfig agent;
    MixtureSpecConfig mixture;
    long steps = 200000;
    int eval_interval = 5000;
    int eval_episodes = 10;
    std::vector<uint64_t> seeds = {0};
    bool explore_conditioned = false;
    std::size_t buffer_capacity = 100000;
    std::string out_dir;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

struct RunRecord {
    long step = 0;
    int id = 0;
    double mean_return = 0.0;
    double normalized = 0.0;
    uint64_t seed = 0;
};

struct RunLog {
    std::string env;
    std::string variant;
    std::vector<RunRecord> records;
};

// JSON-lines, one record per evaluation point. Doubles are printed with
// round-trip precision so identical runs produce identical bytes.
std::string runlog_to_jsonl(const RunLog& log);
void write_runlog(const std::string& path, const RunLog& log);
RunLog read_runlog(const std::string& path);

// Score normalization anchors for one task.
struct ScoreNorm {
    double random_score = 0.0;
    double optimal_score = 1.0;
};

// (raw - random) / (optimal - random); requires optimal > random.
double normalize_score(double raw, const ScoreNorm& norm);

struct BootstrapCi {
    double lo = 0.0, hi = 0.0, mean = 0.0;
};

// Percentile bootstrap of the mean. Deterministic under the caller's rng.
BootstrapCi bootstrap_ci(std::span<const double> samples, int resamples, double level, Rng& rng);

// One-sided sign test: p-value of observing at least `successes` out of `n`
// under the fair-coin null.
double sign_test_p(int successes, int n);

// CSV rows in the aggregate-report layout
// (experiment, variant, task, seed, step, raw, normalized).
struct ReportRow {
    std::string experiment, variant, task;
    uint64_t seed = 0;
    long step = 0;
    double raw = 0.0, normalized = 0.0;
};

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace rcrl
