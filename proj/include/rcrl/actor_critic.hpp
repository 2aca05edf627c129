#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rcrl/categorical.hpp"
#include "rcrl/env.hpp"
#include "rcrl/net.hpp"
#include "rcrl/replay.hpp"
#include "rcrl/reward.hpp"
#include "rcrl/rng.hpp"

namespace rcrl {

// How the parameterization reaches the networks. Input modes extend the
// state; multi_head selects an output head instead and needs a finite pool.
enum class ConditioningMode { concat_psi, concat_delta, embedding, multi_head, none };

const char* conditioning_name(ConditioningMode m);
ConditioningMode conditioning_from_name(const std::string& name);

// One learnable row per pool id. Rows receive gradients only from the
// critic loss; the actor reads them without updating.
struct EmbeddingTable {
    int rows = 0, dim = 0;
    std::vector<double> data;

    EmbeddingTable() = default;
    EmbeddingTable(int rows_, int dim_, Rng& init);

    std::span<const double> row(int id) const;
    std::span<double> row(int id);
};

// Conditioned network input:
//   concat_psi    [s, psi]
//   concat_delta  [s, (delta - 1) / (sqrt(spread) - 1)]
//   embedding     [s, E[id]]
//   none          s
// multi_head conditions at the output and must not be passed here.
std::vector<double> condition_input(const StateVec& s, const Parameterization& p,
                                    ConditioningMode mode, const EmbeddingTable* embeddings,
                                    double spread);

struct ActorCriticConfig {
    ConditioningMode mode = ConditioningMode::embedding;
    int embed_dim = 8;
    double gamma = 0.6;
    double tau = 0.005;
    double lr = 1e-3;
    double momentum = 0.9;
    int critic_width = 128, critic_depth = 2;
    int actor_width = 64, actor_depth = 2;
    int n_atoms = 51;
    double v_min = -5.0, v_max = 5.0;
    double explore_sigma = 0.2;
    double spread = 16.0;  // standardization constant for concat_delta
    bool normalize_rewards = true;
};

// Deterministic-policy actor with a categorical critic. The critic is
// trained by cross-entropy against the projected Bellman target from the
// Polyak-tracked target networks; the actor ascends the critic's expected
// value. Both are conditioned on the reward parameterization.
class ActorCriticAgent {
public:
    ActorCriticAgent(const EnvDescriptor& desc, std::vector<Parameterization> pool,
                     ActorCriticConfig cfg, uint64_t seed);

    const ActorCriticConfig& config() const { return cfg_; }
    const std::vector<Parameterization>& pool() const { return pool_; }
    const CategoricalGrid& grid() const { return grid_; }
    EmbeddingTable& embeddings() { return emb_; }
    const EmbeddingTable& embeddings() const { return emb_; }

    Action act(const StateVec& s, const Parameterization& p, bool explore, Rng& rng) const;

    // One critic step on a relabeled, normalized batch. Returns the mean
    // cross-entropy loss. Applies Polyak updates to both target networks.
    double critic_update(const std::vector<const Transition*>& batch,
                         const std::vector<const Parameterization*>& params,
                         std::span<const double> rewards);

    // One deterministic-policy-gradient step; critic parameters are frozen.
    double actor_update(const std::vector<const Transition*>& batch,
                        const std::vector<const Parameterization*>& params);

    // Projected Bellman target distributions from the target networks.
    std::vector<double> build_targets(const std::vector<const Transition*>& batch,
                                      const std::vector<const Parameterization*>& params,
                                      std::span<const double> rewards) const;

    // Loss + gradients against caller-supplied target distributions; the
    // conditioned inputs are rebuilt from the current embeddings, so the
    // embedding gradient (online path only, targets detached) is included.
    double critic_loss_on_batch(const std::vector<const Transition*>& batch,
                                const std::vector<const Parameterization*>& params,
                                std::span<const double> target_probs, HeadedNet::Grads& grads,
                                std::vector<double>* emb_grads);

    // Lower-level form over prebuilt inputs; `ids` are pool ids (head
    // routing and embedding rows derive from them).
    double critic_loss_from_targets(std::span<const double> Z, std::span<const double> A,
                                    int batch, std::span<const int> ids,
                                    std::span<const double> target_probs, HeadedNet::Grads& grads,
                                    std::vector<double>* emb_grads);

    // Actor objective (negated expected critic value) and its gradients;
    // critic parameters and embeddings receive nothing.
    double actor_loss_and_grads(const std::vector<const Transition*>& batch,
                                const std::vector<const Parameterization*>& params,
                                HeadedNet::Grads& grads);

    std::vector<double> conditioned(const StateVec& s, const Parameterization& p) const;
    int head_of(const Parameterization& p) const;

    // Expected value of the online critic at (z, a).
    double q_value(std::span<const double> z, std::span<const double> a, int head) const;

    void reset_optimizers();

    HeadedNet& critic() { return critic_; }
    HeadedNet& actor() { return actor_; }
    const HeadedNet& critic() const { return critic_; }
    const HeadedNet& actor() const { return actor_; }
    HeadedNet& critic_target() { return critic_target_; }
    HeadedNet& actor_target() { return actor_target_; }

    // action squashing: a = mid + half * tanh(u)
    std::vector<double> squash(std::span<const double> u) const;

private:
    int cond_dim() const;
    void forward_actor(const HeadedNet& net, std::span<const double> Z, int batch,
                       std::span<const int> heads, HeadedNet::Cache& cache,
                       std::vector<double>& actions) const;

    EnvDescriptor desc_;
    std::vector<Parameterization> pool_;
    ActorCriticConfig cfg_;
    CategoricalGrid grid_;
    EmbeddingTable emb_;
    HeadedNet actor_, critic_;
    HeadedNet actor_target_, critic_target_;
    SgdMomentum opt_actor_, opt_critic_, opt_emb_;
    std::vector<double> act_mid_, act_half_;
};

}  // namespace rcrl
