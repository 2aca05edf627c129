#include "rcrl/actor_critic.hpp"

#include <cmath>
#include <stdexcept>

#include "rcrl/kernels.hpp"

namespace rcrl {

const char* conditioning_name(ConditioningMode m) {
    switch (m) {
        case ConditioningMode::concat_psi: return "concat_psi";
        case ConditioningMode::concat_delta: return "concat_delta";
        case ConditioningMode::embedding: return "embedding";
        case ConditioningMode::multi_head: return "multi_head";
        case ConditioningMode::none: return "none";
    }
    return "?";
}

ConditioningMode conditioning_from_name(const std::string& name) {
    if (name == "concat_psi") return ConditioningMode::concat_psi;
    if (name == "concat_delta") return ConditioningMode::concat_delta;
    if (name == "embedding") return ConditioningMode::embedding;
    if (name == "multi_head") return ConditioningMode::multi_head;
    if (name == "none") return ConditioningMode::none;
    throw std::invalid_argument("unknown conditioning mode: " + name);
}

EmbeddingTable::EmbeddingTable(int rows_, int dim_, Rng& init) : rows(rows_), dim(dim_) {
    data.resize(static_cast<std::size_t>(rows) * dim);
    for (double& v : data) v = init.uniform(-0.1, 0.1);
}

std::span<const double> EmbeddingTable::row(int id) const {
    if (id < 0 || id >= rows) throw std::out_of_range("embedding table: unknown id");
    return {data.data() + static_cast<std::size_t>(id) * dim, static_cast<std::size_t>(dim)};
}

std::span<double> EmbeddingTable::row(int id) {
    if (id < 0 || id >= rows) throw std::out_of_range("embedding table: unknown id");
    return {data.data() + static_cast<std::size_t>(id) * dim, static_cast<std::size_t>(dim)};
}

std::vector<double> condition_input(const StateVec& s, const Parameterization& p,
                                    ConditioningMode mode, const EmbeddingTable* embeddings,
                                    double spread) {
    if (mode == ConditioningMode::multi_head)
        throw std::invalid_argument("condition_input: multi_head conditions at the output");
    std::vector<double> z = s.values;
    switch (mode) {
        case ConditioningMode::none:
            break;
        case ConditioningMode::concat_psi:
            z.insert(z.end(), p.psi.begin(), p.psi.end());
            break;
        case ConditioningMode::concat_delta: {
            if (!p.delta)
                throw std::invalid_argument("concat_delta: parameterization has no perturbation");
            const double denom = std::sqrt(spread) - 1.0;
            for (double d : *p.delta) z.push_back((d - 1.0) / denom);
            break;
        }
        case ConditioningMode::embedding: {
            if (!embeddings) throw std::invalid_argument("embedding mode without a table");
            const auto row = embeddings->row(p.id);
            z.insert(z.end(), row.begin(), row.end());
            break;
        }
        case ConditioningMode::multi_head:
            break;
    }
    return z;
}

namespace {

std::vector<int> hidden_sizes(int width, int depth) { return std::vector<int>(depth, width); }

}  // namespace

ActorCriticAgent::ActorCriticAgent(const EnvDescriptor& desc, std::vector<Parameterization> pool,
                                   ActorCriticConfig cfg, uint64_t seed)
    : desc_(desc),
      pool_(std::move(pool)),
      cfg_(cfg),
      grid_(cfg.n_atoms, cfg.v_min, cfg.v_max),
      opt_actor_(cfg.lr, cfg.momentum),
      opt_critic_(cfg.lr, cfg.momentum),
      opt_emb_(cfg.lr, cfg.momentum) {
    if (desc_.action_spec.kind != ActionSpec::Kind::continuous)
        throw std::invalid_argument("actor-critic agent requires a continuous action space");
    if (cfg_.mode == ConditioningMode::multi_head && pool_.empty())
        throw std::invalid_argument("multi_head conditioning requires a finite pool");

    Rng init(seed, streams::init);
    if (cfg_.mode == ConditioningMode::embedding) {
        if (pool_.empty()) throw std::invalid_argument("embedding conditioning requires a finite pool");
        emb_ = EmbeddingTable(static_cast<int>(pool_.size()), cfg_.embed_dim, init);
    }

    const int n_heads = cfg_.mode == ConditioningMode::multi_head
                            ? static_cast<int>(pool_.size())
                            : 1;
    const int zdim = cond_dim();
    const int adim = desc_.action_spec.dim;

    critic_ = HeadedNet(zdim + adim, hidden_sizes(cfg_.critic_width, cfg_.critic_depth),
                        grid_.n_atoms, n_heads, init);
    actor_ = HeadedNet(zdim, hidden_sizes(cfg_.actor_width, cfg_.actor_depth), adim, n_heads, init);
    critic_target_ = critic_;
    actor_target_ = actor_;

    act_mid_.resize(adim);
    act_half_.resize(adim);
    for (int d = 0; d < adim; ++d) {
        act_mid_[d] = 0.5 * (desc_.action_spec.high[d] + desc_.action_spec.low[d]);
        act_half_[d] = 0.5 * (desc_.action_spec.high[d] - desc_.action_spec.low[d]);
    }
}

int ActorCriticAgent::cond_dim() const {
    switch (cfg_.mode) {
        case ConditioningMode::concat_psi:
        case ConditioningMode::concat_delta:
            return desc_.state_dim + desc_.component_count;
        case ConditioningMode::embedding:
            return desc_.state_dim + cfg_.embed_dim;
        case ConditioningMode::multi_head:
        case ConditioningMode::none:
            return desc_.state_dim;
    }
    return desc_.state_dim;
}

std::vector<double> ActorCriticAgent::conditioned(const StateVec& s,
                                                  const Parameterization& p) const {
    if (cfg_.mode == ConditioningMode::multi_head) return s.values;
    return condition_input(s, p, cfg_.mode, &emb_, cfg_.spread);
}

int ActorCriticAgent::head_of(const Parameterization& p) const {
    if (cfg_.mode != ConditioningMode::multi_head) return 0;
    if (p.id < 0 || p.id >= critic_.n_heads())
        throw std::out_of_range("multi_head: parameterization id out of head range");
    return p.id;
}

std::vector<double> ActorCriticAgent::squash(std::span<const double> u) const {
    const int adim = desc_.action_spec.dim;
    std::vector<double> a(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const int d = static_cast<int>(i) % adim;
        a[i] = act_mid_[d] + act_half_[d] * std::tanh(u[i]);
    }
    return a;
}

Action ActorCriticAgent::act(const StateVec& s, const Parameterization& p, bool explore,
                             Rng& rng) const {
    const std::vector<double> z = conditioned(s, p);
    const int head = head_of(p);
    HeadedNet::Cache cache;
    actor_.forward(z, 1, std::span(&head, 1), cache);
    std::vector<double> a = squash(actor_.output(cache));
    if (explore) {
        for (int d = 0; d < desc_.action_spec.dim; ++d) {
            a[d] += rng.normal(0.0, cfg_.explore_sigma);
            a[d] = std::clamp(a[d], desc_.action_spec.low[d], desc_.action_spec.high[d]);
        }
    }
    Action out;
    out.continuous = std::move(a);
    return out;
}

double ActorCriticAgent::q_value(std::span<const double> z, std::span<const double> a,
                                 int head) const {
    std::vector<double> x(z.begin(), z.end());
    x.insert(x.end(), a.begin(), a.end());
    HeadedNet::Cache cache;
    critic_.forward(x, 1, std::span(&head, 1), cache);
    std::vector<double> probs = critic_.output(cache);
    softmax_rows(probs, 1, grid_.n_atoms);
    return grid_.expectation(probs);
}

double ActorCriticAgent::critic_loss_from_targets(std::span<const double> Z,
                                                  std::span<const double> A, int batch,
                                                  std::span<const int> ids,
                                                  std::span<const double> target_probs,
                                                  HeadedNet::Grads& grads,
                                                  std::vector<double>* emb_grads) {
    const int zdim = cond_dim();
    const int adim = desc_.action_spec.dim;
    const int n = grid_.n_atoms;

    std::vector<int> heads(batch, 0);
    if (cfg_.mode == ConditioningMode::multi_head)
        heads.assign(ids.begin(), ids.end());

    std::vector<double> X(static_cast<std::size_t>(batch) * (zdim + adim));
    for (int b = 0; b < batch; ++b) {
        std::copy_n(&Z[static_cast<std::size_t>(b) * zdim], zdim,
                    &X[static_cast<std::size_t>(b) * (zdim + adim)]);
        std::copy_n(&A[static_cast<std::size_t>(b) * adim], adim,
                    &X[static_cast<std::size_t>(b) * (zdim + adim) + zdim]);
    }

    HeadedNet::Cache cache;
    critic_.forward(X, batch, heads, cache);
    std::vector<double> probs = critic_.output(cache);
    softmax_rows(probs, batch, n);

    // cross-entropy against the target distribution; d loss / d logits is
    // (p - target) / batch
    double loss = 0.0;
    std::vector<double> dlogits(probs.size());
    for (int b = 0; b < batch; ++b) {
        for (int k = 0; k < n; ++k) {
            const std::size_t o = static_cast<std::size_t>(b) * n + k;
            const double t = target_probs[o];
            if (t > 0.0) loss -= t * std::log(std::max(probs[o], 1e-300));
            dlogits[o] = (probs[o] - t) / batch;
        }
    }
    loss /= batch;
    if (!std::isfinite(loss)) throw std::runtime_error("critic update produced a non-finite loss");

    std::vector<double> dX;
    critic_.backward(cache, dlogits, &grads, emb_grads ? &dX : nullptr);

    if (emb_grads) {
        emb_grads->assign(emb_.data.size(), 0.0);
        if (cfg_.mode == ConditioningMode::embedding) {
            for (int b = 0; b < batch; ++b) {
                double* row = emb_grads->data() + static_cast<std::size_t>(ids[b]) * cfg_.embed_dim;
                const double* dz =
                    &dX[static_cast<std::size_t>(b) * (zdim + adim) + desc_.state_dim];
                for (int j = 0; j < cfg_.embed_dim; ++j) row[j] += dz[j];
            }
        }
    }
    return loss;
}

void ActorCriticAgent::forward_actor(const HeadedNet& net, std::span<const double> Z, int batch,
                                     std::span<const int> heads, HeadedNet::Cache& cache,
                                     std::vector<double>& actions) const {
    net.forward(Z, batch, heads, cache);
    actions = squash(net.output(cache));
}

std::vector<double> ActorCriticAgent::build_targets(
    const std::vector<const Transition*>& batch,
    const std::vector<const Parameterization*>& params, std::span<const double> rewards) const {
    const int B = static_cast<int>(batch.size());
    const int zdim = cond_dim();
    const int adim = desc_.action_spec.dim;
    const int n = grid_.n_atoms;

    std::vector<double> Znext(static_cast<std::size_t>(B) * zdim);
    std::vector<int> heads(B);
    std::vector<unsigned char> done(B);
    for (int b = 0; b < B; ++b) {
        const auto zn = conditioned(batch[b]->next_state, *params[b]);
        std::copy(zn.begin(), zn.end(), &Znext[static_cast<std::size_t>(b) * zdim]);
        heads[b] = head_of(*params[b]);
        done[b] = batch[b]->done ? 1 : 0;
    }

    // bootstrap distribution from the target networks at (z', policy(z'))
    HeadedNet::Cache actor_cache;
    std::vector<double> next_actions;
    forward_actor(actor_target_, Znext, B, heads, actor_cache, next_actions);

    std::vector<double> Xnext(static_cast<std::size_t>(B) * (zdim + adim));
    for (int b = 0; b < B; ++b) {
        std::copy_n(&Znext[static_cast<std::size_t>(b) * zdim], zdim,
                    &Xnext[static_cast<std::size_t>(b) * (zdim + adim)]);
        std::copy_n(&next_actions[static_cast<std::size_t>(b) * adim], adim,
                    &Xnext[static_cast<std::size_t>(b) * (zdim + adim) + zdim]);
    }
    HeadedNet::Cache tgt_cache;
    critic_target_.forward(Xnext, B, heads, tgt_cache);
    std::vector<double> next_probs = critic_target_.output(tgt_cache);
    softmax_rows(next_probs, B, n);

    std::vector<double> target(static_cast<std::size_t>(B) * n);
    kernels::project_batch(grid_.atoms, next_probs, B, n, rewards, done, cfg_.gamma, grid_.atoms,
                           n, target);
    return target;
}

double ActorCriticAgent::critic_loss_on_batch(const std::vector<const Transition*>& batch,
                                              const std::vector<const Parameterization*>& params,
                                              std::span<const double> target_probs,
                                              HeadedNet::Grads& grads,
                                              std::vector<double>* emb_grads) {
    const int B = static_cast<int>(batch.size());
    const int zdim = cond_dim();
    const int adim = desc_.action_spec.dim;

    std::vector<double> Z(static_cast<std::size_t>(B) * zdim);
    std::vector<double> A(static_cast<std::size_t>(B) * adim);
    std::vector<int> ids(B);
    for (int b = 0; b < B; ++b) {
        const auto z = conditioned(batch[b]->state, *params[b]);
        std::copy(z.begin(), z.end(), &Z[static_cast<std::size_t>(b) * zdim]);
        std::copy(batch[b]->action.continuous.begin(), batch[b]->action.continuous.end(),
                  &A[static_cast<std::size_t>(b) * adim]);
        ids[b] = params[b]->id;
    }
    return critic_loss_from_targets(Z, A, B, ids, target_probs, grads, emb_grads);
}

double ActorCriticAgent::critic_update(const std::vector<const Transition*>& batch,
                                       const std::vector<const Parameterization*>& params,
                                       std::span<const double> rewards) {
    const std::vector<double> target = build_targets(batch, params, rewards);

    HeadedNet::Grads grads = critic_.make_grads();
    std::vector<double> emb_grads;
    const double loss = critic_loss_on_batch(
        batch, params, target, grads,
        cfg_.mode == ConditioningMode::embedding ? &emb_grads : nullptr);

    {
        auto pb = critic_.param_blocks();
        auto gb = HeadedNet::grad_blocks(grads);
        std::vector<std::span<const double>> gc(gb.begin(), gb.end());
        opt_critic_.step(std::move(pb), std::move(gc));
    }
    if (cfg_.mode == ConditioningMode::embedding) {
        std::vector<std::span<double>> pb{std::span(emb_.data)};
        std::vector<std::span<const double>> gb{std::span<const double>(emb_grads)};
        opt_emb_.step(std::move(pb), std::move(gb));
    }

    critic_target_.track(critic_, cfg_.tau);
    return loss;
}

double ActorCriticAgent::actor_loss_and_grads(const std::vector<const Transition*>& batch,
                                              const std::vector<const Parameterization*>& params,
                                              HeadedNet::Grads& grads) {
    const int B = static_cast<int>(batch.size());
    const int zdim = cond_dim();
    const int adim = desc_.action_spec.dim;
    const int n = grid_.n_atoms;

    std::vector<double> Z(static_cast<std::size_t>(B) * zdim);
    std::vector<int> heads(B);
    for (int b = 0; b < B; ++b) {
        const auto z = conditioned(batch[b]->state, *params[b]);
        std::copy(z.begin(), z.end(), &Z[static_cast<std::size_t>(b) * zdim]);
        heads[b] = head_of(*params[b]);
    }

    HeadedNet::Cache actor_cache;
    std::vector<double> actions;
    forward_actor(actor_, Z, B, heads, actor_cache, actions);

    std::vector<double> X(static_cast<std::size_t>(B) * (zdim + adim));
    for (int b = 0; b < B; ++b) {
        std::copy_n(&Z[static_cast<std::size_t>(b) * zdim], zdim,
                    &X[static_cast<std::size_t>(b) * (zdim + adim)]);
        std::copy_n(&actions[static_cast<std::size_t>(b) * adim], adim,
                    &X[static_cast<std::size_t>(b) * (zdim + adim) + zdim]);
    }
    HeadedNet::Cache critic_cache;
    critic_.forward(X, B, heads, critic_cache);
    std::vector<double> probs = critic_.output(critic_cache);
    softmax_rows(probs, B, n);

    // maximize expected value: d E[V] / d logit_k = p_k (atom_k - E[V])
    double loss = 0.0;
    std::vector<double> dlogits(probs.size());
    for (int b = 0; b < B; ++b) {
        const double ev = grid_.expectation(
            std::span(&probs[static_cast<std::size_t>(b) * n], static_cast<std::size_t>(n)));
        loss -= ev / B;
        for (int k = 0; k < n; ++k) {
            const std::size_t o = static_cast<std::size_t>(b) * n + k;
            dlogits[o] = -probs[o] * (grid_.atoms[k] - ev) / B;
        }
    }
    if (!std::isfinite(loss)) throw std::runtime_error("actor update produced a non-finite loss");

    // critic parameters stay frozen: only the input gradient is used
    std::vector<double> dXcritic;
    critic_.backward(critic_cache, dlogits, nullptr, &dXcritic);

    // d action / d raw-output through the tanh squashing
    const auto& u = actor_.output(actor_cache);
    std::vector<double> du(static_cast<std::size_t>(B) * adim);
    for (int b = 0; b < B; ++b)
        for (int d = 0; d < adim; ++d) {
            const std::size_t o = static_cast<std::size_t>(b) * adim + d;
            const double th = std::tanh(u[o]);
            const double da = dXcritic[static_cast<std::size_t>(b) * (zdim + adim) + zdim + d];
            du[o] = da * act_half_[d] * (1.0 - th * th);
        }

    actor_.backward(actor_cache, du, &grads, nullptr);
    return loss;
}

double ActorCriticAgent::actor_update(const std::vector<const Transition*>& batch,
                                      const std::vector<const Parameterization*>& params) {
    HeadedNet::Grads grads = actor_.make_grads();
    const double loss = actor_loss_and_grads(batch, params, grads);
    {
        auto pb = actor_.param_blocks();
        auto gb = HeadedNet::grad_blocks(grads);
        std::vector<std::span<const double>> gc(gb.begin(), gb.end());
        opt_actor_.step(std::move(pb), std::move(gc));
    }
    actor_target_.track(actor_, cfg_.tau);
    return loss;
}

void ActorCriticAgent::reset_optimizers() {
    opt_actor_.reset();
    opt_critic_.reset();
    opt_emb_.reset();
}

}  // namespace rcrl
