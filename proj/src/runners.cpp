#include "rcrl/runners.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rcrl {

using nlohmann::json;

namespace {

// Pools are a property of the experiment, not of the run seed.
constexpr uint64_t kPoolSeed = 0xA5A5;
constexpr uint64_t kNormSeed = 0x5C04E;
constexpr uint64_t kEvalStream = 1000000;

const Parameterization& nominal_of(const MixtureConfig& m) {
    if (m.continuous) return m.nominal_continuous;
    return m.pool[m.nominal_id];
}

std::string variant_label(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << (cfg.agent.kind == AgentKind::tabular ? "tabular" : "actor_critic") << '/'
        << conditioning_name(cfg.agent.conditioning) << '/';
    switch (cfg.mixture.pool.kind) {
        case PoolSpecConfig::Kind::arc: out << "arc"; break;
        case PoolSpecConfig::Kind::prc: out << "prc" << cfg.mixture.pool.n; break;
        case PoolSpecConfig::Kind::continuous: out << "continuous"; break;
    }
    out << "/a" << format_double(cfg.mixture.alpha);
    if (cfg.explore_conditioned) out << "/explore-cond";
    return out.str();
}

enum class CollectMode { nominal, sampled_per_episode, cycle_pool };

// One environment interaction + learning phase over an existing learner.
// Evaluation runs under the mixture's current nominal parameterization.
void train_loop(TrainedAgent& ta, Env& env, long steps, uint64_t seed, const ScoreNorm& norm,
                RunLog& log, CollectMode collect) {
    const ExperimentConfig& cfg = ta.cfg;
    const EnvDescriptor& desc = env.descriptor();
    const bool finite = !ta.mixture.continuous;
    const Parameterization& nominal = nominal_of(ta.mixture);

    ReplayBuffer buffer(cfg.buffer_capacity, desc.component_count);
    Rng explore_rng(seed, streams::explore);
    Rng buffer_rng(seed, streams::buffer);
    Rng mixture_rng(seed, streams::mixture);

    auto eval_env = make_env(cfg.env);
    const auto greedy_policy = [&](const Parameterization& p) {
        return [&ta, &p](const StateVec& s) {
            Rng dummy(0);
            return ta.act(s, p, /*explore=*/false, dummy);
        };
    };

    long episode = 0;
    StateVec s = env.reset(Rng::mix(seed, episode));

    Parameterization behave = nominal;
    const auto pick_behavior = [&]() {
        switch (collect) {
            case CollectMode::nominal:
                behave = nominal;
                break;
            case CollectMode::sampled_per_episode:
                if (finite)
                    behave = ta.mixture.pool[sample_mixture(mixture_rng, ta.mixture, 1)[0]];
                else
                    behave = sample_mixture_continuous(mixture_rng, ta.mixture, 1)[0];
                break;
            case CollectMode::cycle_pool:
                behave = ta.mixture.pool[episode % ta.mixture.pool.size()];
                break;
        }
    };
    pick_behavior();

    const int B = cfg.agent.batch;
    std::vector<Parameterization> cont_params;

    const auto evaluate = [&](long step) {
        EvalResult er = evaluate_policy(*eval_env, greedy_policy(nominal), nominal,
                                        cfg.eval_episodes, Rng::mix(seed, kEvalStream + step));
        log.records.push_back({step, finite ? ta.mixture.nominal_id : kContinuousId, er.mean,
                               normalize_score(er.mean, norm), seed});
    };

    for (long step = 1; step <= steps; ++step) {
        const Action a = ta.act(s, behave, /*explore=*/true, explore_rng);
        const StepResult r = env.step(a);
        buffer.push({s, a, r.components, r.next_state, r.done});
        if (r.done || r.truncated) {
            ++episode;
            s = env.reset(Rng::mix(seed, episode));
            pick_behavior();
        } else {
            s = r.next_state;
        }

        if (static_cast<int>(buffer.size()) >= std::max(cfg.agent.warmup, 1) &&
            step % cfg.agent.update_every == 0) {
            const auto idx = buffer.sample_indices(buffer_rng, B);
            if (finite) {
                const auto ids = sample_mixture(mixture_rng, ta.mixture, B);
                auto rewards = relabel_indices(buffer, idx, ids, ta.mixture.pool);
                if (ta.tabular) {
                    for (int i = 0; i < B; ++i)
                        ta.tabular->update(buffer.at(idx[i]), ids[i], rewards[i]);
                } else {
                    if (ta.ac->config().normalize_rewards)
                        for (int i = 0; i < B; ++i)
                            rewards[i] = ta.normalizer.normalize(ids[i], rewards[i]);
                    std::vector<const Transition*> batch(B);
                    std::vector<const Parameterization*> params(B);
                    for (int i = 0; i < B; ++i) {
                        batch[i] = &buffer.at(idx[i]);
                        params[i] = &ta.mixture.pool[ids[i]];
                    }
                    ta.ac->critic_update(batch, params, rewards);
                    ta.ac->actor_update(batch, params);
                }
            } else {
                cont_params = sample_mixture_continuous(mixture_rng, ta.mixture, B);
                std::vector<const Transition*> batch(B);
                std::vector<const Parameterization*> params(B);
                std::vector<double> rewards(B);
                for (int i = 0; i < B; ++i) {
                    batch[i] = &buffer.at(idx[i]);
                    params[i] = &cont_params[i];
                    rewards[i] = compose(cont_params[i], batch[i]->components);
                }
                ta.ac->critic_update(batch, params, rewards);
                ta.ac->actor_update(batch, params);
            }
        }

        if (step % cfg.eval_interval == 0) evaluate(step);
    }
    if (steps % cfg.eval_interval != 0) evaluate(steps);
    ta.steps_trained += steps;
}

}  // namespace

Action TrainedAgent::act(const StateVec& s, const Parameterization& p, bool explore,
                         Rng& rng) const {
    if (tabular) return tabular->act(s, p.id, explore, rng);
    return ac->act(s, p, explore, rng);
}

MixtureConfig build_mixture(Env& env, const ExperimentConfig& cfg) {
    const EnvDescriptor& desc = env.descriptor();
    MixtureConfig m;
    m.alpha = cfg.mixture.alpha;
    switch (cfg.mixture.pool.kind) {
        case PoolSpecConfig::Kind::arc: {
            m.pool = make_arc_set(env, kPoolSeed);
            int nid = -1;
            for (const auto& p : m.pool)
                if (p.psi == desc.nominal.psi && p.composition == desc.nominal.composition)
                    nid = p.id;
            if (nid < 0) {
                Parameterization nom = desc.nominal;
                nom.id = static_cast<int>(m.pool.size());
                m.pool.push_back(std::move(nom));
                nid = static_cast<int>(m.pool.size()) - 1;
            }
            m.nominal_id = nid;
            break;
        }
        case PoolSpecConfig::Kind::prc: {
            m.pool = make_prc_pool(desc.nominal, cfg.mixture.pool.n, cfg.mixture.pool.perturb,
                                   kPoolSeed);
            m.nominal_id = 0;
            break;
        }
        case PoolSpecConfig::Kind::continuous: {
            m.continuous = true;
            m.perturb = cfg.mixture.pool.perturb;
            m.nominal_continuous = desc.nominal;
            m.nominal_continuous.id = kContinuousId;
            m.nominal_continuous.delta =
                std::vector<double>(desc.nominal.psi.size(), 1.0);
            break;
        }
    }
    return m;
}

ScoreNorm compute_score_norm(const Env& env, const Parameterization& p) {
    const EnvDescriptor& desc = env.descriptor();
    auto sim = make_env(desc.name);

    ScoreNorm norm;
    {
        Rng rng(kNormSeed, streams::eval);
        Policy random_policy = [&](const StateVec&) {
            Action a;
            if (desc.action_spec.kind == ActionSpec::Kind::discrete) {
                a.index = rng.uniform_int(desc.action_spec.n);
            } else {
                a.continuous.resize(desc.action_spec.dim);
                for (int d = 0; d < desc.action_spec.dim; ++d)
                    a.continuous[d] = rng.uniform(desc.action_spec.low[d], desc.action_spec.high[d]);
            }
            return a;
        };
        norm.random_score = evaluate_policy(*sim, random_policy, p, 100, kNormSeed).mean;
    }

    if (desc.discrete) {
        const ExactQ exact = value_iteration(env, p, 0.99, 1e-10);
        Policy greedy = [&](const StateVec& s) {
            Action a;
            a.index = exact.greedy(s.index);
            return a;
        };
        norm.optimal_score = evaluate_policy(*sim, greedy, p, 10, kNormSeed).mean;
    } else {
        norm.optimal_score = best_openloop_return(env, p, CemConfig{}, kNormSeed);
    }
    if (!(norm.optimal_score > norm.random_score))
        throw std::runtime_error("degenerate score normalization for " + desc.name);
    return norm;
}

TrainResult run_training(const ExperimentConfig& cfg, uint64_t seed, const ScoreNorm* norm_in) {
    auto env = make_env(cfg.env);
    const EnvDescriptor& desc = env->descriptor();

    TrainResult res;
    res.agent.cfg = cfg;
    res.agent.seed = seed;
    res.agent.mixture = build_mixture(*env, cfg);
    res.agent.pool = res.agent.mixture.pool;

    if (cfg.agent.kind == AgentKind::tabular) {
        if (res.agent.mixture.continuous)
            throw ConfigError("invalid config field: mixture.pool.kind (tabular needs a finite pool)");
        TabularQ::Config tc;
        tc.gamma = cfg.agent.gamma;
        tc.lr = cfg.agent.lr;
        tc.lr_power = cfg.agent.lr_power;
        tc.epsilon = cfg.agent.epsilon;
        tc.conditioned = cfg.agent.conditioning != ConditioningMode::none;
        res.agent.tabular.emplace(*env, static_cast<int>(res.agent.pool.size()), tc);
    } else {
        ActorCriticConfig ac = cfg.agent.ac;
        ac.mode = cfg.agent.conditioning;
        res.agent.ac.emplace(desc, res.agent.pool, ac, seed);
    }
    res.agent.normalizer = RewardNormalizer(static_cast<int>(res.agent.pool.size()));

    const ScoreNorm norm =
        norm_in ? *norm_in : compute_score_norm(*env, nominal_of(res.agent.mixture));

    res.log.env = cfg.env;
    res.log.variant = variant_label(cfg);
    train_loop(res.agent, *env, cfg.steps, seed, norm, res.log,
               cfg.explore_conditioned ? CollectMode::sampled_per_episode : CollectMode::nominal);
    return res;
}

TrainResult run_training_baseline(const ExperimentConfig& cfg, uint64_t seed,
                                  const ScoreNorm* norm_in) {
    if (cfg.agent.kind != AgentKind::tabular)
        throw ConfigError("invalid config field: agent.kind (baseline trainer is tabular)");
    auto env = make_env(cfg.env);
    const EnvDescriptor& desc = env->descriptor();
    const Parameterization nominal = desc.nominal;

    TrainResult res;
    res.agent.cfg = cfg;
    res.agent.seed = seed;
    TabularQ::Config tc;
    tc.gamma = cfg.agent.gamma;
    tc.lr = cfg.agent.lr;
    tc.lr_power = cfg.agent.lr_power;
    tc.epsilon = cfg.agent.epsilon;
    tc.conditioned = false;
    res.agent.tabular.emplace(*env, 1, tc);

    const ScoreNorm norm = norm_in ? *norm_in : compute_score_norm(*env, nominal);

    ReplayBuffer buffer(cfg.buffer_capacity, desc.component_count);
    Rng explore_rng(seed, streams::explore);
    Rng buffer_rng(seed, streams::buffer);
    auto eval_env = make_env(cfg.env);
    TabularQ& q = *res.agent.tabular;

    res.log.env = cfg.env;
    res.log.variant = "baseline/tabular";

    long episode = 0;
    StateVec s = env->reset(Rng::mix(seed, episode));

    const auto evaluate = [&](long step) {
        Policy greedy = [&](const StateVec& sv) {
            Rng dummy(0);
            return q.act(sv, 0, false, dummy);
        };
        EvalResult er = evaluate_policy(*eval_env, greedy, nominal, cfg.eval_episodes,
                                        Rng::mix(seed, kEvalStream + step));
        res.log.records.push_back({step, 0, er.mean, normalize_score(er.mean, norm), seed});
    };

    for (long step = 1; step <= cfg.steps; ++step) {
        const Action a = q.act(s, 0, true, explore_rng);
        const StepResult r = env->step(a);
        buffer.push({s, a, r.components, r.next_state, r.done});
        if (r.done || r.truncated) {
            ++episode;
            s = env->reset(Rng::mix(seed, episode));
        } else {
            s = r.next_state;
        }
        if (static_cast<int>(buffer.size()) >= std::max(cfg.agent.warmup, 1) &&
            step % cfg.agent.update_every == 0) {
            const auto idx = buffer.sample_indices(buffer_rng, cfg.agent.batch);
            for (std::size_t i : idx) {
                const Transition& t = buffer.at(i);
                q.update(t, 0, compose(nominal, t.components));
            }
        }
        if (step % cfg.eval_interval == 0) evaluate(step);
    }
    if (cfg.steps % cfg.eval_interval != 0) evaluate(cfg.steps);
    res.agent.steps_trained = cfg.steps;
    return res;
}

std::vector<TrainResult> run_training_all_seeds(const ExperimentConfig& cfg) {
    auto env = make_env(cfg.env);
    const MixtureConfig mixture = build_mixture(*env, cfg);
    const ScoreNorm norm = compute_score_norm(*env, nominal_of(mixture));

    const int n = static_cast<int>(cfg.seeds.size());
    std::vector<TrainResult> results(n);
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            results[i] = run_training(cfg, cfg.seeds[i], &norm);
        } catch (const std::exception& e) {
#pragma omp critical
            error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);
    return results;
}

std::vector<ZeroShotRow> run_zero_shot_sweep(const TrainedAgent& agent, int episodes,
                                             uint64_t eval_seed, const std::vector<int>* subset) {
    if (agent.mixture.continuous)
        throw std::invalid_argument("zero-shot sweep requires a finite pool");
    auto env = make_env(agent.cfg.env);

    std::vector<int> ids;
    if (subset) {
        ids = *subset;
        for (int id : ids)
            if (id < 0 || id >= static_cast<int>(agent.pool.size()))
                throw std::out_of_range("zero-shot sweep: id outside the checkpoint pool");
    } else {
        ids.resize(agent.pool.size());
        for (std::size_t i = 0; i < agent.pool.size(); ++i) ids[i] = agent.pool[i].id;
    }

    std::vector<ZeroShotRow> rows;
    for (int id : ids) {
        const Parameterization& p = agent.pool[id];
        Policy policy = [&](const StateVec& s) {
            Rng dummy(0);
            return agent.act(s, p, false, dummy);
        };
        const EvalResult er =
            evaluate_policy(*env, policy, p, episodes, Rng::mix(eval_seed, 7000 + id));
        const ScoreNorm norm = compute_score_norm(*env, p);
        rows.push_back({id, er.metric, er.mean, normalize_score(er.mean, norm)});
    }
    return rows;
}

TransferResult run_finetune_transfer(const TrainedAgent& source, int target_id, long steps,
                                     bool keep_relabeling) {
    if (source.mixture.continuous)
        throw std::invalid_argument("transfer requires a finite pool");
    if (target_id < 0 || target_id >= static_cast<int>(source.pool.size()))
        throw std::out_of_range("transfer: target id absent from the source pool");

    TransferResult res;
    res.agent = source;
    res.agent.mixture.nominal_id = target_id;
    if (!keep_relabeling) res.agent.mixture.alpha = 1.0;
    // fresh run under the target: new optimizer state, no random warmup
    if (res.agent.ac) res.agent.ac->reset_optimizers();
    if (res.agent.tabular) res.agent.tabular->reset_lr_state();
    res.agent.cfg.agent.warmup = 1;

    auto env = make_env(source.cfg.env);
    const Parameterization& target = res.agent.pool[target_id];
    const ScoreNorm norm = compute_score_norm(*env, target);

    res.log.env = source.cfg.env;
    res.log.variant = variant_label(source.cfg) + "/transfer";

    const uint64_t seed = Rng::mix(source.seed, 0x7AB5);
    if (steps > 0) {
        train_loop(res.agent, *env, steps, seed, norm, res.log, CollectMode::nominal);
    }
    // final (or zero-shot, when steps == 0) evaluation under the target
    Policy policy = [&](const StateVec& s) {
        Rng dummy(0);
        return res.agent.act(s, target, false, dummy);
    };
    const EvalResult er =
        evaluate_policy(*env, policy, target, source.cfg.eval_episodes,
                        Rng::mix(seed, kEvalStream));
    res.final_return = er.mean;
    res.final_score = normalize_score(er.mean, norm);
    return res;
}

DecompositionResult run_decomposition(const ExperimentConfig& base, uint64_t seed) {
    auto env = make_env(base.env);
    const MixtureConfig mixture = build_mixture(*env, base);
    if (mixture.continuous || mixture.pool.size() < 2)
        throw ConfigError("invalid config field: mixture.pool (decomposition needs >= 2 tasks)");
    const long n_tasks = static_cast<long>(mixture.pool.size());
    const ScoreNorm norm = compute_score_norm(*env, nominal_of(mixture));

    DecompositionResult out;
    struct Regime {
        const char* name;
        double alpha;
        long steps;
        CollectMode collect;
    };
    const Regime regimes[] = {
        {"st", 1.0, base.steps, CollectMode::nominal},
        {"st_rcrl", base.mixture.alpha, base.steps, CollectMode::nominal},
        {"st_expanded", 1.0, base.steps * n_tasks, CollectMode::cycle_pool},
        {"mt", 1.0 / static_cast<double>(n_tasks), base.steps * n_tasks, CollectMode::cycle_pool},
    };

    for (const Regime& reg : regimes) {
        ExperimentConfig cfg = base;
        cfg.mixture.alpha = reg.alpha;
        cfg.steps = reg.steps;

        TrainResult tr;
        tr.agent.cfg = cfg;
        tr.agent.seed = seed;
        tr.agent.mixture = mixture;
        tr.agent.mixture.alpha = reg.alpha;
        tr.agent.pool = mixture.pool;
        TabularQ::Config tc;
        tc.gamma = cfg.agent.gamma;
        tc.lr = cfg.agent.lr;
        tc.lr_power = cfg.agent.lr_power;
        tc.epsilon = cfg.agent.epsilon;
        tc.conditioned = cfg.agent.conditioning != ConditioningMode::none;
        auto run_env = make_env(cfg.env);
        tr.agent.tabular.emplace(*run_env, static_cast<int>(mixture.pool.size()), tc);
        tr.agent.normalizer = RewardNormalizer(static_cast<int>(mixture.pool.size()));

        tr.log.env = cfg.env;
        tr.log.variant = std::string("decompose/") + reg.name;
        train_loop(tr.agent, *run_env, cfg.steps, seed, norm, tr.log, reg.collect);

        out.final_scores[reg.name] = tr.log.records.back().normalized;
        out.logs[reg.name] = std::move(tr.log);
    }
    return out;
}

// ---------------------------------------------------------------------------
// checkpoints
// ---------------------------------------------------------------------------

namespace {

json pool_to_json(const std::vector<Parameterization>& pool) {
    json arr = json::array();
    for (const auto& p : pool) {
        json e;
        e["id"] = p.id;
        e["psi"] = p.psi;
        e["composition"] = composition_name(p.composition);
        if (p.delta) e["delta"] = *p.delta;
        arr.push_back(std::move(e));
    }
    return arr;
}

std::vector<Parameterization> pool_from_json(const json& arr) {
    std::vector<Parameterization> pool;
    for (const auto& e : arr) {
        Parameterization p;
        p.id = e.at("id").get<int>();
        p.psi = e.at("psi").get<std::vector<double>>();
        p.composition = composition_from_name(e.at("composition").get<std::string>());
        if (e.contains("delta")) p.delta = e.at("delta").get<std::vector<double>>();
        pool.push_back(std::move(p));
    }
    return pool;
}

template <typename Span>
json blocks_to_json(const std::vector<Span>& blocks) {
    json arr = json::array();
    for (const auto& b : blocks) arr.push_back(std::vector<double>(b.begin(), b.end()));
    return arr;
}

void blocks_from_json(const json& arr, std::vector<std::span<double>> blocks) {
    if (arr.size() != blocks.size())
        throw std::runtime_error("checkpoint: parameter block count mismatch");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto v = arr[i].get<std::vector<double>>();
        if (v.size() != blocks[i].size())
            throw std::runtime_error("checkpoint: parameter block size mismatch");
        std::copy(v.begin(), v.end(), blocks[i].begin());
    }
}

}  // namespace

void save_checkpoint(const std::string& path, const TrainedAgent& agent) {
    json j;
    j["config"] = json::parse(config_to_json(agent.cfg));
    j["seed"] = agent.seed;
    j["steps_trained"] = agent.steps_trained;
    j["mixture"] = {{"alpha", agent.mixture.alpha},
                    {"nominal_id", agent.mixture.nominal_id},
                    {"continuous", agent.mixture.continuous}};
    j["pool"] = pool_to_json(agent.pool);

    json norm = json::array();
    for (const auto& s : agent.normalizer.raw())
        norm.push_back({{"count", s.count}, {"mean", s.mean}, {"m2", s.m2}});
    j["normalizer"] = std::move(norm);

    if (agent.tabular) {
        j["tabular"] = {{"q", agent.tabular->table()},
                        {"visits", agent.tabular->visits()}};
    }
    if (agent.ac) {
        const ActorCriticAgent& ac = *agent.ac;
        j["ac"] = {
            {"actor", blocks_to_json(ac.actor().param_blocks())},
            {"critic", blocks_to_json(ac.critic().param_blocks())},
            {"actor_target",
             blocks_to_json(const_cast<ActorCriticAgent&>(ac).actor_target().param_blocks())},
            {"critic_target",
             blocks_to_json(const_cast<ActorCriticAgent&>(ac).critic_target().param_blocks())},
            {"embeddings", ac.embeddings().data},
        };
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump() << "\n";
}

TrainedAgent load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
    json j = json::parse(in);

    TrainedAgent agent;
    agent.cfg = parse_config(j.at("config").dump());
    agent.seed = j.at("seed").get<uint64_t>();
    agent.steps_trained = j.at("steps_trained").get<long>();
    agent.pool = pool_from_json(j.at("pool"));

    agent.mixture.alpha = j.at("mixture").at("alpha").get<double>();
    agent.mixture.nominal_id = j.at("mixture").at("nominal_id").get<int>();
    agent.mixture.continuous = j.at("mixture").at("continuous").get<bool>();
    agent.mixture.pool = agent.pool;
    agent.mixture.perturb = agent.cfg.mixture.pool.perturb;

    agent.normalizer = RewardNormalizer(static_cast<int>(agent.pool.size()));
    {
        const json& norm = j.at("normalizer");
        auto& raw = agent.normalizer.raw();
        for (std::size_t i = 0; i < norm.size() && i < raw.size(); ++i) {
            raw[i].count = norm[i].at("count").get<long>();
            raw[i].mean = norm[i].at("mean").get<double>();
            raw[i].m2 = norm[i].at("m2").get<double>();
        }
    }

    auto env = make_env(agent.cfg.env);
    if (j.contains("tabular")) {
        TabularQ::Config tc;
        tc.gamma = agent.cfg.agent.gamma;
        tc.lr = agent.cfg.agent.lr;
        tc.lr_power = agent.cfg.agent.lr_power;
        tc.epsilon = agent.cfg.agent.epsilon;
        tc.conditioned = agent.cfg.agent.conditioning != ConditioningMode::none;
        agent.tabular.emplace(*env, static_cast<int>(agent.pool.size()), tc);
        const auto q = j.at("tabular").at("q").get<std::vector<double>>();
        if (q.size() != agent.tabular->table().size())
            throw std::runtime_error("checkpoint: tabular shape mismatch");
        agent.tabular->table() = q;
    }
    if (j.contains("ac")) {
        ActorCriticConfig ac_cfg = agent.cfg.agent.ac;
        ac_cfg.mode = agent.cfg.agent.conditioning;
        agent.ac.emplace(env->descriptor(), agent.pool, ac_cfg, agent.seed);
        const json& ac = j.at("ac");
        blocks_from_json(ac.at("actor"), agent.ac->actor().param_blocks());
        blocks_from_json(ac.at("critic"), agent.ac->critic().param_blocks());
        blocks_from_json(ac.at("actor_target"), agent.ac->actor_target().param_blocks());
        blocks_from_json(ac.at("critic_target"), agent.ac->critic_target().param_blocks());
        agent.ac->embeddings().data = ac.at("embeddings").get<std::vector<double>>();
    }
    return agent;
}

}  // namespace rcrl
