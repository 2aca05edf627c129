#include "rcrl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rcrl {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

const json& require(const json& j, const char* field, const char* ctx) {
    auto it = j.find(field);
    if (it == j.end())
        throw ConfigError(std::string("missing config field: ") + ctx + field);
    return *it;
}

template <typename T>
T opt(const json& j, const char* field, T fallback) {
    auto it = j.find(field);
    if (it == j.end()) return fallback;
    return it->get<T>();
}

PerturbSpec parse_perturb(const json& j) {
    PerturbSpec spec;
    spec.spread = opt(j, "spread", spec.spread);
    spec.stratified = opt(j, "stratified", spec.stratified);
    spec.sigma = opt(j, "sigma", spec.sigma);
    const std::string dist = opt<std::string>(j, "distribution", "log_uniform");
    if (dist == "log_uniform")
        spec.dist = PerturbSpec::Dist::log_uniform;
    else if (dist == "log_gaussian")
        spec.dist = PerturbSpec::Dist::log_gaussian;
    else
        throw ConfigError("invalid config field: mixture.pool.distribution");
    if (!(spec.spread > 1.0)) throw ConfigError("invalid config field: mixture.pool.spread");
    return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.env = require(j, "env", "").get<std::string>();
    if (cfg.env.empty()) throw ConfigError("invalid config field: env");

    const json& agent = require(j, "agent", "");
    const std::string kind = require(agent, "kind", "agent.").get<std::string>();
    if (kind == "tabular")
        cfg.agent.kind = AgentKind::tabular;
    else if (kind == "actor_critic")
        cfg.agent.kind = AgentKind::actor_critic;
    else
        throw ConfigError("invalid config field: agent.kind");

    try {
        cfg.agent.conditioning =
            conditioning_from_name(opt<std::string>(agent, "conditioning", "embedding"));
    } catch (const std::invalid_argument&) {
        throw ConfigError("invalid config field: agent.conditioning");
    }
    cfg.agent.gamma = opt(agent, "gamma", cfg.agent.gamma);
    if (!(cfg.agent.gamma > 0.0 && cfg.agent.gamma < 1.0))
        throw ConfigError("invalid config field: agent.gamma");
    cfg.agent.batch = opt(agent, "batch", cfg.agent.batch);
    cfg.agent.update_every = opt(agent, "update_every", cfg.agent.update_every);
    cfg.agent.warmup = opt(agent, "warmup", cfg.agent.warmup);
    cfg.agent.lr = opt(agent, "lr", cfg.agent.lr);
    cfg.agent.lr_power = opt(agent, "lr_power", cfg.agent.lr_power);
    cfg.agent.epsilon = opt(agent, "epsilon", cfg.agent.epsilon);

    cfg.agent.ac.mode = cfg.agent.conditioning;
    cfg.agent.ac.gamma = cfg.agent.gamma;
    cfg.agent.ac.embed_dim = opt(agent, "embed_dim", cfg.agent.ac.embed_dim);
    cfg.agent.ac.tau = opt(agent, "tau", cfg.agent.ac.tau);
    cfg.agent.ac.lr = opt(agent, "lr", cfg.agent.ac.lr);
    cfg.agent.ac.momentum = opt(agent, "momentum", cfg.agent.ac.momentum);
    cfg.agent.ac.critic_width = opt(agent, "critic_width", cfg.agent.ac.critic_width);
    cfg.agent.ac.critic_depth = opt(agent, "critic_depth", cfg.agent.ac.critic_depth);
    cfg.agent.ac.actor_width = opt(agent, "actor_width", cfg.agent.ac.actor_width);
    cfg.agent.ac.actor_depth = opt(agent, "actor_depth", cfg.agent.ac.actor_depth);
    cfg.agent.ac.n_atoms = opt(agent, "atoms", cfg.agent.ac.n_atoms);
    cfg.agent.ac.v_min = opt(agent, "v_min", cfg.agent.ac.v_min);
    cfg.agent.ac.v_max = opt(agent, "v_max", cfg.agent.ac.v_max);
    cfg.agent.ac.explore_sigma = opt(agent, "explore_sigma", cfg.agent.ac.explore_sigma);
    cfg.agent.ac.normalize_rewards = opt(agent, "normalize_rewards", cfg.agent.ac.normalize_rewards);

    const json& mixture = require(j, "mixture", "");
    cfg.mixture.alpha = require(mixture, "alpha", "mixture.").get<double>();
    if (cfg.mixture.alpha < 0.0 || cfg.mixture.alpha > 1.0)
        throw ConfigError("invalid config field: mixture.alpha");
    const json& pool = require(mixture, "pool", "mixture.");
    const std::string pool_kind = require(pool, "kind", "mixture.pool.").get<std::string>();
    if (pool_kind == "arc")
        cfg.mixture.pool.kind = PoolSpecConfig::Kind::arc;
    else if (pool_kind == "prc")
        cfg.mixture.pool.kind = PoolSpecConfig::Kind::prc;
    else if (pool_kind == "continuous")
        cfg.mixture.pool.kind = PoolSpecConfig::Kind::continuous;
    else
        throw ConfigError("invalid config field: mixture.pool.kind");
    if (cfg.mixture.pool.kind != PoolSpecConfig::Kind::arc) {
        cfg.mixture.pool.n = opt(pool, "n", cfg.mixture.pool.n);
        if (cfg.mixture.pool.n < 1) throw ConfigError("invalid config field: mixture.pool.n");
        cfg.mixture.pool.perturb = parse_perturb(pool);
    }
    cfg.agent.ac.spread = cfg.mixture.pool.perturb.spread;

    cfg.steps = require(j, "steps", "").get<long>();
    if (cfg.steps < 0) throw ConfigError("invalid config field: steps");
    cfg.eval_interval = opt(j, "eval_interval", cfg.eval_interval);
    if (cfg.eval_interval < 1) throw ConfigError("invalid config field: eval_interval");
    cfg.eval_episodes = opt(j, "eval_episodes", cfg.eval_episodes);
    cfg.seeds = opt(j, "seeds", cfg.seeds);
    if (cfg.seeds.empty()) throw ConfigError("invalid config field: seeds");
    cfg.explore_conditioned = opt(j, "explore_conditioned", cfg.explore_conditioned);
    cfg.buffer_capacity = opt<std::size_t>(j, "buffer_capacity", cfg.buffer_capacity);
    if (cfg.buffer_capacity == 0) throw ConfigError("invalid config field: buffer_capacity");
    cfg.out_dir = opt<std::string>(j, "out_dir", "");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json agent;
    agent["kind"] = cfg.agent.kind == AgentKind::tabular ? "tabular" : "actor_critic";
    agent["conditioning"] = conditioning_name(cfg.agent.conditioning);
    agent["gamma"] = cfg.agent.gamma;
    agent["batch"] = cfg.agent.batch;
    agent["update_every"] = cfg.agent.update_every;
    agent["warmup"] = cfg.agent.warmup;
    agent["lr"] = cfg.agent.lr;
    agent["lr_power"] = cfg.agent.lr_power;
    agent["epsilon"] = cfg.agent.epsilon;
    agent["embed_dim"] = cfg.agent.ac.embed_dim;
    agent["tau"] = cfg.agent.ac.tau;
    agent["momentum"] = cfg.agent.ac.momentum;
    agent["critic_width"] = cfg.agent.ac.critic_width;
    agent["critic_depth"] = cfg.agent.ac.critic_depth;
    agent["actor_width"] = cfg.agent.ac.actor_width;
    agent["actor_depth"] = cfg.agent.ac.actor_depth;
    agent["atoms"] = cfg.agent.ac.n_atoms;
    agent["v_min"] = cfg.agent.ac.v_min;
    agent["v_max"] = cfg.agent.ac.v_max;
    agent["explore_sigma"] = cfg.agent.ac.explore_sigma;
    agent["normalize_rewards"] = cfg.agent.ac.normalize_rewards;

    json pool;
    switch (cfg.mixture.pool.kind) {
        case PoolSpecConfig::Kind::arc: pool["kind"] = "arc"; break;
        case PoolSpecConfig::Kind::prc: pool["kind"] = "prc"; break;
        case PoolSpecConfig::Kind::continuous: pool["kind"] = "continuous"; break;
    }
    pool["n"] = cfg.mixture.pool.n;
    pool["spread"] = cfg.mixture.pool.perturb.spread;
    pool["stratified"] = cfg.mixture.pool.perturb.stratified;
    pool["sigma"] = cfg.mixture.pool.perturb.sigma;
    pool["distribution"] = cfg.mixture.pool.perturb.dist == PerturbSpec::Dist::log_uniform
                               ? "log_uniform"
                               : "log_gaussian";

    json j;
    j["env"] = cfg.env;
    j["agent"] = std::move(agent);
    j["mixture"] = {{"alpha", cfg.mixture.alpha}, {"pool", std::move(pool)}};
    j["steps"] = cfg.steps;
    j["eval_interval"] = cfg.eval_interval;
    j["eval_episodes"] = cfg.eval_episodes;
    j["seeds"] = cfg.seeds;
    j["explore_conditioned"] = cfg.explore_conditioned;
    j["buffer_capacity"] = cfg.buffer_capacity;
    j["out_dir"] = cfg.out_dir;
    return j.dump(2);
}

std::string runlog_to_jsonl(const RunLog& log) {
    std::ostringstream out;
    for (const RunRecord& r : log.records) {
        out << "{\"step\":" << r.step << ",\"id\":" << r.id
            << ",\"return\":" << format_double(r.mean_return)
            << ",\"normalized\":" << format_double(r.normalized) << ",\"seed\":" << r.seed
            << "}\n";
    }
    return out.str();
}

void write_runlog(const std::string& path, const RunLog& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write run log: " + path);
    out << runlog_to_jsonl(log);
}

RunLog read_runlog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read run log: " + path);
    RunLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        RunRecord r;
        r.step = j.at("step").get<long>();
        r.id = j.at("id").get<int>();
        r.mean_return = j.at("return").get<double>();
        r.normalized = j.at("normalized").get<double>();
        r.seed = j.at("seed").get<uint64_t>();
        log.records.push_back(r);
    }
    return log;
}

double normalize_score(double raw, const ScoreNorm& norm) {
    if (!(norm.optimal_score > norm.random_score))
        throw std::invalid_argument("normalize_score: optimal must exceed random");
    return (raw - norm.random_score) / (norm.optimal_score - norm.random_score);
}

BootstrapCi bootstrap_ci(std::span<const double> samples, int resamples, double level, Rng& rng) {
    const int n = static_cast<int>(samples.size());
    if (n < 2) throw std::invalid_argument("bootstrap_ci: need at least 2 samples");
    if (resamples < 1 || !(level > 0.0 && level < 1.0))
        throw std::invalid_argument("bootstrap_ci: bad resamples or level");

    BootstrapCi ci;
    for (double s : samples) ci.mean += s;
    ci.mean /= n;

    std::vector<double> means(resamples);
    for (int r = 0; r < resamples; ++r) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += samples[rng.uniform_int(n)];
        means[r] = acc / n;
    }
    std::sort(means.begin(), means.end());

    auto quantile = [&](double q) {
        const double pos = q * (resamples - 1);
        const int lo = static_cast<int>(std::floor(pos));
        const int hi = std::min(lo + 1, resamples - 1);
        const double frac = pos - lo;
        return means[lo] * (1.0 - frac) + means[hi] * frac;
    };
    ci.lo = quantile(0.5 * (1.0 - level));
    ci.hi = quantile(1.0 - 0.5 * (1.0 - level));
    return ci;
}

double sign_test_p(int successes, int n) {
    if (n < 0 || successes < 0 || successes > n)
        throw std::invalid_argument("sign_test_p: bad counts");
    if (n == 0) return 1.0;
    // P(X >= successes) for X ~ Binomial(n, 1/2)
    double p = 0.0;
    double coef = 1.0;  // C(n, 0)
    for (int j = 0; j <= n; ++j) {
        if (j >= successes) p += coef;
        coef = coef * (n - j) / (j + 1);
    }
    return p * std::pow(0.5, n);
}

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "experiment,variant,task,seed,step,raw,normalized\n";
    for (const ReportRow& r : rows)
        out << r.experiment << ',' << r.variant << ',' << r.task << ',' << r.seed << ',' << r.step
            << ',' << format_double(r.raw) << ',' << format_double(r.normalized) << "\n";
}

}  // namespace rcrl
