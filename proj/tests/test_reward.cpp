#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "rcrl/env.hpp"
#include "rcrl/reward.hpp"

using namespace rcrl;

namespace {

Parameterization linear(std::vector<double> psi) {
    Parameterization p;
    p.psi = std::move(psi);
    p.composition = Composition::linear;
    return p;
}

}  // namespace

TEST_CASE("compose") {
    CHECK(compose(linear({1.0, 0.1, 0.3}), {{1.0, 0.5, 0.2}}) == doctest::Approx(1.11));

    Parameterization mult;
    mult.psi = {1.0, 1.0};
    mult.composition = Composition::multiplicative;
    CHECK(compose(mult, {{0.5, 0.5}}) == doctest::Approx(0.25));

    // 0^0 convention
    mult.psi = {0.0, 1.0};
    CHECK(compose(mult, {{0.0, 0.5}}) == doctest::Approx(0.5));

    CHECK_THROWS_AS(compose(linear({1.0}), {{1.0, 2.0}}), std::invalid_argument);
    mult.psi = {1.0, 1.0};
    CHECK_THROWS_AS(compose(mult, {{-0.1, 0.5}}), std::invalid_argument);
}

TEST_CASE("identity perturbation composes identically") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Parameterization nominal;
        nominal.composition = trial % 2 ? Composition::linear : Composition::multiplicative;
        RewardComponents c;
        for (int i = 0; i < 4; ++i) {
            nominal.psi.push_back(rng.uniform(0.0, 2.0));
            c.c.push_back(rng.uniform(0.0, 1.0));
        }
        Parameterization perturbed = nominal;
        perturbed.delta = std::vector<double>(4, 1.0);
        for (int i = 0; i < 4; ++i) perturbed.psi[i] = nominal.psi[i] * (*perturbed.delta)[i];
        CHECK(compose(perturbed, c) == compose(nominal, c));
    }
}

TEST_CASE("linear scaling scales compose exactly") {
    Rng rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        Parameterization p = linear({rng.uniform(), rng.uniform(), rng.uniform()});
        RewardComponents c{{rng.uniform(), rng.uniform(), rng.uniform()}};
        Parameterization doubled = p;
        for (double& x : doubled.psi) x *= 2.0;
        CHECK(compose(doubled, c) == 2.0 * compose(p, c));
    }
}

TEST_CASE("perturbation support and symmetry") {
    PerturbSpec spec;
    spec.spread = 16.0;
    spec.stratified = false;
    Rng rng(7);
    double log_sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto d = sample_perturbation(rng, spec, 3);
        for (double x : d) {
            CHECK(x >= 0.25);
            CHECK(x <= 4.0);
        }
        log_sum += std::log(d[0]);
    }
    CHECK(std::abs(log_sum / n) < 0.02);

    CHECK_THROWS_AS(sample_perturbation(rng, spec, 0), std::invalid_argument);
    PerturbSpec bad;
    bad.spread = 1.0;
    CHECK_THROWS_AS(sample_perturbation(rng, bad, 2), std::invalid_argument);
}

TEST_CASE("log-gaussian perturbations respect the support") {
    PerturbSpec spec;
    spec.spread = 4.0;
    spec.dist = PerturbSpec::Dist::log_gaussian;
    spec.sigma = 1.5;  // wide, so truncation matters
    Rng rng(8);
    for (int i = 0; i < 20000; ++i) {
        const auto d = sample_perturbation(rng, spec, 2);
        for (double x : d) {
            CHECK(x >= 0.5);
            CHECK(x <= 2.0);
        }
    }
}

TEST_CASE("stratified batches place one draw per log-stratum per component") {
    PerturbSpec spec;
    spec.spread = 16.0;
    spec.stratified = true;
    Rng rng(21);
    const int B = 1024, k = 3;
    const auto batch = sample_perturbation_batch(rng, spec, k, B);
    const double h = spec.log_half_width();
    const double width = 2.0 * h / B;
    for (int i = 0; i < k; ++i) {
        std::vector<int> counts(B, 0);
        for (int b = 0; b < B; ++b) {
            const double lg = std::log(batch[b][i]);
            int stratum = static_cast<int>((lg + h) / width);
            stratum = std::clamp(stratum, 0, B - 1);
            counts[stratum]++;
        }
        CHECK(*std::min_element(counts.begin(), counts.end()) == 1);
        CHECK(*std::max_element(counts.begin(), counts.end()) == 1);
    }
}

TEST_CASE("prc pool construction") {
    Parameterization nominal = linear({1.0, 0.25});
    PerturbSpec spec;
    spec.spread = 16.0;

    const auto pool = make_prc_pool(nominal, 1024, spec, 42);
    REQUIRE(pool.size() == 1025);
    CHECK(pool[0].id == 0);
    CHECK(pool[0].psi == nominal.psi);
    REQUIRE(pool[0].delta.has_value());
    for (double d : *pool[0].delta) CHECK(d == 1.0);

    for (const auto& p : pool) {
        REQUIRE(p.delta.has_value());
        for (std::size_t i = 0; i < p.psi.size(); ++i) {
            CHECK(p.psi[i] >= 0.0);  // sign structure preserved
            CHECK(p.psi[i] == doctest::Approx(nominal.psi[i] * (*p.delta)[i]).epsilon(1e-12));
        }
    }

    const auto again = make_prc_pool(nominal, 1024, spec, 42);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        CHECK(pool[i].psi == again[i].psi);
        CHECK(*pool[i].delta == *again[i].delta);
    }

    // degenerate nominal: all perturbed copies coincide but keep their ids
    const auto zero_pool = make_prc_pool(linear({0.0, 0.0}), 1, spec, 1);
    REQUIRE(zero_pool.size() == 2);
    CHECK(zero_pool[0].psi == zero_pool[1].psi);
    CHECK(zero_pool[0].id != zero_pool[1].id);

    CHECK_THROWS_AS(make_prc_pool(nominal, 0, spec, 1), std::invalid_argument);
}

TEST_CASE("arc sets") {
    auto chain = make_env("speed-chain");
    const auto arc = make_arc_set(*chain);
    REQUIRE(arc.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(arc[i].id == i);
        CHECK(arc[i].psi[i] == 1.0);
    }

    auto grid = make_env("grid-zone");
    CHECK(make_arc_set(*grid).size() == 3);
}

namespace {

// wraps speed-chain but reports [c3, c3, c0]: two components always equal,
// one distinct; exercises the duplicate-task merge
class ProbeEnv final : public Env {
public:
    explicit ProbeEnv(int k) : inner_(make_env("speed-chain")) {
        desc_ = inner_->descriptor();
        desc_.name = "probe";
        desc_.component_count = k;
        desc_.nominal.psi.assign(k, 0.0);
        desc_.nominal.psi[0] = 1.0;
    }
    const EnvDescriptor& descriptor() const override { return desc_; }
    int state_count() const override { return inner_->state_count(); }
    StateVec decode_state(int index) const override { return inner_->decode_state(index); }
    StepResult transition(const StateVec& s, const Action& a) const override {
        StepResult r = inner_->transition(s, a);
        const double v3 = r.components.c[3];
        const double v0 = r.components.c[0];
        r.components.c.assign(desc_.component_count, v3);
        if (desc_.component_count >= 3) r.components.c[2] = v0;
        return r;
    }

protected:
    StateVec initial_state(uint64_t) const override { return decode_state(0); }

private:
    std::unique_ptr<Env> inner_;
    EnvDescriptor desc_;
};

}  // namespace

TEST_CASE("functionally duplicate tasks merge; single-component envs are rejected") {
    ProbeEnv env(3);
    const auto arc = make_arc_set(env);
    CHECK(arc.size() == 2);

    ProbeEnv single(1);
    CHECK_THROWS_AS(make_arc_set(single), std::invalid_argument);
}

namespace {

MixtureConfig arc_mixture(double alpha) {
    auto chain = make_env("speed-chain");
    MixtureConfig m;
    m.alpha = alpha;
    m.pool = make_arc_set(*chain);
    m.nominal_id = 3;
    return m;
}

}  // namespace

TEST_CASE("mixture sampling law") {
    Rng rng(17);
    {
        const auto m = arc_mixture(1.0);
        const auto ids = sample_mixture(rng, m, 256);
        for (int id : ids) CHECK(id == 3);
    }
    {
        const auto m = arc_mixture(0.0);
        const auto ids = sample_mixture(rng, m, 64);
        for (int id : ids) CHECK(id != 3);
    }
    {
        const auto m = arc_mixture(0.5);
        long nominal = 0;
        double mean_batch = 0.0;
        for (int rep = 0; rep < 1000; ++rep) {
            long in_batch = 0;
            for (int id : sample_mixture(rng, m, 512))
                if (id == 3) ++in_batch;
            nominal += in_batch;
            mean_batch += in_batch;
        }
        mean_batch /= 1000.0;
        CHECK(std::abs(mean_batch - 256.0) < 10.0);
        (void)nominal;
    }
    {
        MixtureConfig solo;
        solo.alpha = 0.5;
        solo.pool = {linear({1.0})};
        solo.pool[0].id = 0;
        solo.nominal_id = 0;
        CHECK_THROWS_AS(sample_mixture(rng, solo, 4), std::invalid_argument);
        solo.alpha = 1.0;
        CHECK_NOTHROW(sample_mixture(rng, solo, 4));
    }
}

TEST_CASE("continuous mixture draws fresh perturbations") {
    MixtureConfig m;
    m.alpha = 0.5;
    m.continuous = true;
    m.perturb.spread = 16.0;
    m.nominal_continuous = linear({1.0, 0.25});
    m.nominal_continuous.id = kContinuousId;

    Rng rng(23);
    const auto params = sample_mixture_continuous(rng, m, 512);
    int nominal = 0;
    for (const auto& p : params) {
        REQUIRE(p.delta.has_value());
        bool identity = true;
        for (std::size_t i = 0; i < p.psi.size(); ++i) {
            CHECK((*p.delta)[i] >= 0.25);
            CHECK((*p.delta)[i] <= 4.0);
            identity = identity && (*p.delta)[i] == 1.0;
            CHECK(p.psi[i] == doctest::Approx(m.nominal_continuous.psi[i] * (*p.delta)[i]));
        }
        if (identity) ++nominal;
    }
    CHECK(nominal > 200);
    CHECK(nominal < 312);
}

TEST_CASE("reward normalizer") {
    RewardNormalizer norm(2);

    SUBCASE("constant stream passes through on the variance floor") {
        for (int i = 0; i < 100; ++i) CHECK(norm.normalize(0, 5.0) == 5.0);
    }

    SUBCASE("outputs approach unit scale") {
        Rng rng(31);
        std::vector<double> outs;
        for (int i = 0; i < 200000; ++i) outs.push_back(norm.normalize(0, rng.normal(3.0, 2.0)));
        // discard the burn-in where statistics were still moving
        outs.erase(outs.begin(), outs.begin() + 1000);
        double mean = 0.0;
        for (double o : outs) mean += o;
        mean /= outs.size();
        double var = 0.0;
        for (double o : outs) var += (o - mean) * (o - mean);
        var /= outs.size();
        CHECK(std::sqrt(var) == doctest::Approx(1.0).epsilon(0.05));
    }

    SUBCASE("ids are isolated") {
        RewardNormalizer segregated(2);
        Rng rng(37);
        std::vector<double> a, b, a2, b2;
        for (int i = 0; i < 5000; ++i) {
            const double ra = rng.uniform(0, 2), rb = rng.uniform(5, 9);
            a.push_back(norm.normalize(0, ra));
            b.push_back(norm.normalize(1, rb));
            a2.push_back(segregated.normalize(0, ra));
        }
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == a2[i]);
        CHECK(norm.stats(0).count == 5000);
        CHECK(norm.stats(1).count == 5000);
        (void)b;
        (void)b2;
    }

    SUBCASE("unknown id") { CHECK_THROWS_AS(norm.normalize(2, 1.0), std::out_of_range); }
}

TEST_CASE("pool files round-trip") {
    Parameterization nominal = linear({1.0, 0.25});
    PerturbSpec spec;
    const auto pool = make_prc_pool(nominal, 8, spec, 5);

    const auto path = std::filesystem::temp_directory_path() / "rcrl_pool_test.json";
    save_pool(path.string(), pool);
    const auto loaded = load_pool(path.string());
    REQUIRE(loaded.size() == pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        CHECK(loaded[i].id == pool[i].id);
        CHECK(loaded[i].psi == pool[i].psi);
        CHECK(*loaded[i].delta == *pool[i].delta);
        CHECK(loaded[i].composition == pool[i].composition);
    }
    std::filesystem::remove(path);
}
