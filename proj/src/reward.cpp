#include "rcrl/reward.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "rcrl/env.hpp"

namespace rcrl {

using nlohmann::json;

double compose(const Parameterization& p, const RewardComponents& c) {
    if (p.psi.size() != c.c.size())
        throw std::invalid_argument("compose: psi and components length mismatch");
    if (p.composition == Composition::linear) {
        double r = 0.0;
        for (std::size_t i = 0; i < c.c.size(); ++i) r += p.psi[i] * c.c[i];
        return r;
    }
    double r = 1.0;
    for (std::size_t i = 0; i < c.c.size(); ++i) {
        if (c.c[i] < 0.0)
            throw std::invalid_argument("compose: multiplicative composition needs c_i >= 0");
        // 0^0 = 1 by convention
        r *= (c.c[i] == 0.0 && p.psi[i] == 0.0) ? 1.0 : std::pow(c.c[i], p.psi[i]);
    }
    return r;
}

namespace {

double draw_log_delta(Rng& rng, const PerturbSpec& spec, double lo, double hi) {
    if (spec.dist == PerturbSpec::Dist::log_uniform) return rng.uniform(lo, hi);
    // gaussian truncated to the support by rejection
    for (;;) {
        const double x = rng.normal(0.0, spec.sigma);
        if (x >= lo && x <= hi) return x;
    }
}

void check_spec(const PerturbSpec& spec, int k) {
    if (k <= 0) throw std::invalid_argument("sample_perturbation: k must be positive");
    if (!(spec.spread > 1.0)) throw std::invalid_argument("perturbation spread must exceed 1");
    if (spec.dist == PerturbSpec::Dist::log_gaussian && !(spec.sigma > 0.0))
        throw std::invalid_argument("log_gaussian sigma must be positive");
}

}  // namespace

std::vector<double> sample_perturbation(Rng& rng, const PerturbSpec& spec, int k) {
    check_spec(spec, k);
    const double h = spec.log_half_width();
    std::vector<double> delta(k);
    for (int i = 0; i < k; ++i) delta[i] = std::exp(draw_log_delta(rng, spec, -h, h));
    return delta;
}

std::vector<std::vector<double>> sample_perturbation_batch(Rng& rng, const PerturbSpec& spec,
                                                           int k, int batch) {
    check_spec(spec, k);
    if (batch <= 0) throw std::invalid_argument("sample_perturbation_batch: batch must be positive");
    const double h = spec.log_half_width();
    std::vector<std::vector<double>> out(batch, std::vector<double>(k));
    if (!spec.stratified) {
        for (int b = 0; b < batch; ++b)
            for (int i = 0; i < k; ++i) out[b][i] = std::exp(draw_log_delta(rng, spec, -h, h));
        return out;
    }
    // per component: one draw per equal log-stratum, stratum order shuffled
    const double width = 2.0 * h / batch;
    std::vector<int> order(batch);
    for (int i = 0; i < k; ++i) {
        std::iota(order.begin(), order.end(), 0);
        for (int b = batch - 1; b > 0; --b) std::swap(order[b], order[rng.uniform_int(b + 1)]);
        for (int b = 0; b < batch; ++b) {
            const double lo = -h + width * order[b];
            out[b][i] = std::exp(draw_log_delta(rng, spec, lo, lo + width));
        }
    }
    return out;
}

std::vector<Parameterization> make_prc_pool(const Parameterization& nominal, int n,
                                            const PerturbSpec& spec, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("make_prc_pool: n must be >= 1");
    const int k = static_cast<int>(nominal.psi.size());
    Rng rng(seed, streams::init);
    std::vector<Parameterization> pool;
    pool.reserve(n + 1);

    Parameterization base = nominal;
    base.id = 0;
    base.delta = std::vector<double>(k, 1.0);
    pool.push_back(std::move(base));

    const auto deltas = sample_perturbation_batch(rng, spec, k, n);
    for (int j = 0; j < n; ++j) {
        Parameterization p;
        p.composition = nominal.composition;
        p.id = j + 1;
        p.delta = deltas[j];
        p.psi.resize(k);
        for (int i = 0; i < k; ++i) p.psi[i] = nominal.psi[i] * deltas[j][i];
        pool.push_back(std::move(p));
    }
    return pool;
}

std::vector<Parameterization> make_arc_set(Env& env, uint64_t probe_seed) {
    const EnvDescriptor& desc = env.descriptor();
    const int k = desc.component_count;
    if (k < 2)
        throw std::invalid_argument("make_arc_set: environment declares a single component");

    std::vector<Parameterization> candidates;
    for (int i = 0; i < k; ++i) {
        Parameterization p;
        p.psi.assign(k, 0.0);
        p.psi[i] = 1.0;
        p.composition = Composition::linear;
        candidates.push_back(std::move(p));
    }

    // probe transitions from a uniform-random policy under the nominal task
    constexpr int kProbeSteps = 256;
    std::vector<RewardComponents> probe;
    probe.reserve(kProbeSteps);
    Rng rng(probe_seed, streams::init);
    env.reset(Rng::mix(probe_seed, 0));
    int episode = 1;
    for (int t = 0; t < kProbeSteps; ++t) {
        Action a;
        if (desc.action_spec.kind == ActionSpec::Kind::discrete) {
            a.index = rng.uniform_int(desc.action_spec.n);
        } else {
            a.continuous.resize(desc.action_spec.dim);
            for (int d = 0; d < desc.action_spec.dim; ++d)
                a.continuous[d] = rng.uniform(desc.action_spec.low[d], desc.action_spec.high[d]);
        }
        StepResult r = env.step(a);
        probe.push_back(r.components);
        if (r.done || r.truncated) env.reset(Rng::mix(probe_seed, episode++));
    }

    // merge candidates whose rewards agree on every probe transition
    constexpr double kTol = 1e-9;
    std::vector<Parameterization> pool;
    for (auto& cand : candidates) {
        bool duplicate = false;
        for (const auto& kept : pool) {
            bool same = true;
            for (const auto& c : probe) {
                if (std::abs(compose(cand, c) - compose(kept, c)) > kTol) {
                    same = false;
                    break;
                }
            }
            if (same) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            cand.id = static_cast<int>(pool.size());
            pool.push_back(cand);
        }
    }
    return pool;
}

std::vector<int> sample_mixture(Rng& rng, const MixtureConfig& cfg, int batch) {
    if (batch < 1) throw std::invalid_argument("sample_mixture: batch must be >= 1");
    if (cfg.continuous)
        throw std::invalid_argument("sample_mixture: finite mode required; use the continuous variant");
    if (cfg.pool.empty()) throw std::invalid_argument("sample_mixture: empty pool");

    std::vector<int> alternatives;
    for (const auto& p : cfg.pool)
        if (p.id != cfg.nominal_id) alternatives.push_back(p.id);
    if (alternatives.empty() && cfg.alpha < 1.0)
        throw std::invalid_argument("sample_mixture: no alternatives available with alpha < 1");

    std::vector<int> ids(batch);
    for (int i = 0; i < batch; ++i) {
        if (cfg.alpha >= 1.0 || rng.uniform() < cfg.alpha)
            ids[i] = cfg.nominal_id;
        else
            ids[i] = alternatives[rng.uniform_int(static_cast<int>(alternatives.size()))];
    }
    return ids;
}

std::vector<Parameterization> sample_mixture_continuous(Rng& rng, const MixtureConfig& cfg,
                                                        int batch) {
    if (batch < 1) throw std::invalid_argument("sample_mixture: batch must be >= 1");
    const int k = static_cast<int>(cfg.nominal_continuous.psi.size());
    std::vector<Parameterization> out(batch);
    for (int i = 0; i < batch; ++i) {
        if (cfg.alpha >= 1.0 || rng.uniform() < cfg.alpha) {
            out[i] = cfg.nominal_continuous;
            out[i].id = kContinuousId;
            out[i].delta = std::vector<double>(k, 1.0);
        } else {
            auto delta = sample_perturbation(rng, cfg.perturb, k);
            Parameterization p;
            p.composition = cfg.nominal_continuous.composition;
            p.id = kContinuousId;
            p.psi.resize(k);
            for (int j = 0; j < k; ++j) p.psi[j] = cfg.nominal_continuous.psi[j] * delta[j];
            p.delta = std::move(delta);
            out[i] = std::move(p);
        }
    }
    return out;
}

void RewardNormalizer::check_id(int id) const {
    if (id < 0 || id >= static_cast<int>(stats_.size()))
        throw std::out_of_range("normalizer: unknown parameterization id");
}

double RewardNormalizer::normalize(int id, double r) {
    check_id(id);
    Stats& s = stats_[id];
    s.count += 1;
    const double d = r - s.mean;
    s.mean += d / s.count;
    s.m2 += d * (r - s.mean);
    return r / scale(id);
}

double RewardNormalizer::scale(int id) const {
    check_id(id);
    const Stats& s = stats_[id];
    if (s.count < 2) return 1.0;
    const double var = s.m2 / s.count;
    if (var < 1e-6) return 1.0;
    return std::sqrt(var);
}

const RewardNormalizer::Stats& RewardNormalizer::stats(int id) const {
    check_id(id);
    return stats_[id];
}

const char* composition_name(Composition c) {
    return c == Composition::linear ? "linear" : "multiplicative";
}

Composition composition_from_name(const std::string& name) {
    if (name == "linear") return Composition::linear;
    if (name == "multiplicative") return Composition::multiplicative;
    throw std::invalid_argument("unknown composition: " + name);
}

void save_pool(const std::string& path, const std::vector<Parameterization>& pool) {
    json arr = json::array();
    for (const auto& p : pool) {
        json e;
        e["id"] = p.id;
        e["psi"] = p.psi;
        e["composition"] = composition_name(p.composition);
        if (p.delta) e["delta"] = *p.delta;
        arr.push_back(std::move(e));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pool file: " + path);
    out << arr.dump(2) << "\n";
}

std::vector<Parameterization> load_pool(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read pool file: " + path);
    json arr = json::parse(in);
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

}  // namespace rcrl
