#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcrl/rng.hpp"
#include "rcrl/types.hpp"

namespace rcrl {

class Env;

enum class Composition { linear, multiplicative };

// Sentinel id for parameterizations drawn on the fly (continuous mode);
// such parameterizations have no pool slot and no normalizer entry.
inline constexpr int kContinuousId = -1;

// A reward specification: coefficient vector plus composition rule.
// `delta` records the multiplicative perturbation that produced `psi`
// when the parameterization was generated from a nominal one.
struct Parameterization {
    std::vector<double> psi;
    Composition composition = Composition::linear;
    int id = -1;
    std::optional<std::vector<double>> delta;
};

// Scalar reward from components:
//   linear          sum_i psi_i * c_i
//   multiplicative  prod_i c_i ^ psi_i, with 0^0 = 1
double compose(const Parameterization& p, const RewardComponents& c);

// Law of the perturbation delta. Support is [1/sqrt(spread), sqrt(spread)],
// symmetric around 1 in log space; spread = 16 gives [0.25, 4.0].
struct PerturbSpec {
    double spread = 16.0;
    bool stratified = true;
    enum class Dist { log_uniform, log_gaussian };
    Dist dist = Dist::log_uniform;
    double sigma = 0.5;  // log-space std for log_gaussian

    double log_half_width() const { return 0.5 * std::log(spread); }
};

// One perturbation vector, elementwise in the support.
std::vector<double> sample_perturbation(Rng& rng, const PerturbSpec& spec, int k);

// A batch of perturbation vectors. With spec.stratified, the log-support is
// split per component into `batch` equal strata, one draw per stratum, with
// the stratum order shuffled independently per component.
std::vector<std::vector<double>> sample_perturbation_batch(Rng& rng, const PerturbSpec& spec,
                                                           int k, int batch);

// Fixed pool of perturbed parameterizations. Entry 0 is the nominal with
// delta = all ones; entries 1..n carry sampled perturbations. Ids are the
// pool positions. Deterministic in `seed`.
std::vector<Parameterization> make_prc_pool(const Parameterization& nominal, int n,
                                            const PerturbSpec& spec, uint64_t seed);

// One parameterization per distinct per-component task reward of `env`.
// Candidates whose rewards agree everywhere on a probe set of transitions
// (256 steps of a uniform-random policy, tolerance 1e-9) are merged.
std::vector<Parameterization> make_arc_set(Env& env, uint64_t probe_seed = 0);

// The sampling law for per-transition parameterizations: the nominal with
// probability alpha, otherwise an alternative (uniform over the non-nominal
// pool in finite mode; a freshly perturbed nominal in continuous mode).
struct MixtureConfig {
    double alpha = 0.5;
    int nominal_id = 0;
    std::vector<Parameterization> pool;  // finite mode; ignored when continuous
    bool continuous = false;
    PerturbSpec perturb;                  // continuous mode
    Parameterization nominal_continuous;  // continuous mode
};

std::vector<int> sample_mixture(Rng& rng, const MixtureConfig& cfg, int batch);
std::vector<Parameterization> sample_mixture_continuous(Rng& rng, const MixtureConfig& cfg,
                                                        int batch);

// Per-parameterization running scale statistics. Rewards are divided by the
// running std of their own id's stream; no mean subtraction. The divisor is
// floored at 1 until the stream has at least two samples and a variance
// above 1e-6, so degenerate (constant) streams pass through unchanged.
class RewardNormalizer {
public:
    struct Stats {
        long count = 0;
        double mean = 0.0;
        double m2 = 0.0;  // sum of squared deviations from the running mean
    };

    RewardNormalizer() = default;
    explicit RewardNormalizer(int n_ids) : stats_(n_ids) {}

    int size() const { return static_cast<int>(stats_.size()); }

    // Updates id's statistics with r and returns the rescaled reward.
    double normalize(int id, double r);

    // Current divisor for id without updating anything.
    double scale(int id) const;

    const Stats& stats(int id) const;

    std::vector<Stats>& raw() { return stats_; }
    const std::vector<Stats>& raw() const { return stats_; }

private:
    void check_id(int id) const;
    std::vector<Stats> stats_;
};

// Pool (de)serialization: JSON array of {id, psi, delta, composition}.
void save_pool(const std::string& path, const std::vector<Parameterization>& pool);
std::vector<Parameterization> load_pool(const std::string& path);

const char* composition_name(Composition c);
Composition composition_from_name(const std::string& name);

}  // namespace rcrl
