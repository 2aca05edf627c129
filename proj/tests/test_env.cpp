#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rcrl/env.hpp"
#include "rcrl/rng.hpp"

using namespace rcrl;

TEST_CASE("tolerance shape") {
    CHECK(tolerance(2.0, 2.0, 1.0) == 1.0);
    CHECK(tolerance(3.5, 2.0, 1.0) == 0.0);
    CHECK(tolerance(2.5, 2.0, 1.0) == doctest::Approx(0.5));
    CHECK(tolerance(1.5, 2.0, 1.0) == doctest::Approx(0.5));  // symmetric
    CHECK_THROWS_AS(tolerance(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tolerance(0.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("tolerance is 1/margin-Lipschitz") {
    Rng rng(11);
    const double margin = 0.7;
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
        const double d = std::abs(tolerance(x, 1.0, margin) - tolerance(y, 1.0, margin));
        CHECK(d <= std::abs(x - y) / margin + 1e-12);
    }
}

TEST_CASE("registry") {
    CHECK_THROWS_AS(make_env("no-such-env"), std::invalid_argument);
    for (const auto& name : env_names()) {
        auto env = make_env(name);
        const EnvDescriptor& d = env->descriptor();
        CHECK(d.name == name);
        CHECK(static_cast<int>(d.nominal.psi.size()) == d.component_count);
    }
}

TEST_CASE("reset is seeded and fixed-start environments start fixed") {
    auto grid = make_env("grid-zone");
    CHECK(grid->reset(0).index == 0);
    CHECK(grid->reset(123).index == 0);

    auto chain = make_env("speed-chain");
    const StateVec s = chain->reset(7);
    CHECK(s.values[0] == 0.0);
    CHECK(s.values[1] == 0.0);

    auto pm = make_env("point-mass");
    const StateVec a = pm->reset(3);
    const StateVec b = pm->reset(3);
    CHECK(a.values == b.values);
    const StateVec c = pm->reset(4);
    CHECK(a.values != c.values);
}

TEST_CASE("grid-zone components") {
    auto env = make_env("grid-zone");
    // walk to the goal corner, then take an arbitrary action
    env->reset(0);
    Action down{}, right{}, stay{};
    down.index = 1;
    right.index = 3;
    stay.index = 4;
    StepResult r;
    for (int i = 0; i < 4; ++i) r = env->step(down);
    for (int i = 0; i < 4; ++i) r = env->step(right);
    CHECK(r.next_state.index == 24);
    r = env->step(right);  // at the goal: proximity component is exactly 1
    CHECK(r.components.c[0] == 1.0);
    r = env->step(stay);
    CHECK(r.components.c[0] == 1.0);
    CHECK(r.components.c[1] == 1.0);  // stay costs nothing

    env->reset(0);
    r = env->step(stay);
    CHECK(r.components.c[0] == doctest::Approx(std::exp(-4.0)));  // manhattan 8 from (0,0)
    CHECK(r.components.c[2] == doctest::Approx(0.2));             // row 0 is not preferred
    r = env->step(down);
    r = env->step(stay);  // now on row 1
    CHECK(r.components.c[2] == 1.0);
}

TEST_CASE("speed-chain components are one-hot in the realized velocity") {
    auto env = make_env("speed-chain");
    env->reset(0);
    Action accel{}, hold{};
    accel.index = 2;
    hold.index = 1;
    env->step(accel);
    StepResult r = env->step(accel);  // v' = 2
    CHECK(r.next_state.values[1] == 2.0);
    r = env->step(hold);  // stay at v = 2
    CHECK(r.next_state.values[1] == 2.0);
    CHECK(r.components.c[2] == 1.0);
    CHECK(r.components.c[0] == 0.0);
    CHECK(r.components.c[1] == 0.0);
    CHECK(r.components.c[3] == 0.0);

    // velocity saturates at 3 and the ring wraps
    for (int i = 0; i < 10; ++i) r = env->step(accel);
    CHECK(r.next_state.values[1] == 3.0);
    CHECK(r.components.c[3] == 1.0);
}

TEST_CASE("point-mass dynamics and components") {
    auto env = make_env("point-mass");
    StateVec s = env->reset(3);
    Action zero{}, push{};
    zero.continuous = {0.0, 0.0};
    push.continuous = {1.0, 0.0};

    StepResult r = env->step(zero);
    CHECK(r.components.c[1] == 1.0);  // zero control cost
    CHECK(r.components.c[0] == 0.0);  // no forward velocity yet
    CHECK(r.next_state.values[0] == doctest::Approx(s.values[0]));

    r = env->step(push);
    CHECK(r.next_state.values[2] == doctest::Approx(0.1));
    CHECK(r.components.c[1] == doctest::Approx(0.5));

    // progress clamps to [0, 1]
    for (int i = 0; i < 200; ++i) {
        r = env->step(push);
        CHECK(r.components.c[0] >= 0.0);
        CHECK(r.components.c[0] <= 1.0);
        if (r.truncated) break;
    }
}

TEST_CASE("components stay in [0,1] under random play") {
    Rng rng(5);
    for (const auto& name : env_names()) {
        auto env = make_env(name);
        const EnvDescriptor& d = env->descriptor();
        env->reset(1);
        for (int t = 0; t < 300; ++t) {
            Action a;
            if (d.action_spec.kind == ActionSpec::Kind::discrete) {
                a.index = rng.uniform_int(d.action_spec.n);
            } else {
                a.continuous.resize(d.action_spec.dim);
                for (int i = 0; i < d.action_spec.dim; ++i)
                    a.continuous[i] = rng.uniform(d.action_spec.low[i], d.action_spec.high[i]);
            }
            const StepResult r = env->step(a);
            REQUIRE(static_cast<int>(r.components.c.size()) == d.component_count);
            for (double c : r.components.c) {
                CHECK(std::isfinite(c));
                CHECK(c >= 0.0);
                CHECK(c <= 1.0);
            }
            if (r.done || r.truncated) env->reset(t);
        }
    }
}

TEST_CASE("horizon truncation") {
    auto env = make_env("speed-chain");
    env->reset(0);
    Action hold{};
    hold.index = 1;
    StepResult r;
    for (int t = 0; t < 40; ++t) {
        r = env->step(hold);
        CHECK_FALSE(r.done);
        CHECK((t == 39) == r.truncated);
    }
}

TEST_CASE("discrete transitions are pure functions of (state, action)") {
    auto env = make_env("grid-zone");
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const StateVec s = env->decode_state(rng.uniform_int(env->state_count()));
        Action a;
        a.index = rng.uniform_int(env->descriptor().action_spec.n);
        const StepResult r1 = env->transition(s, a);
        const StepResult r2 = env->transition(s, a);
        CHECK(r1.next_state.index == r2.next_state.index);
        CHECK(r1.components.c == r2.components.c);
    }
}

TEST_CASE("state index round-trips through decode") {
    for (const auto& name : {"grid-zone", "speed-chain"}) {
        auto env = make_env(name);
        for (int s = 0; s < env->state_count(); ++s) CHECK(env->decode_state(s).index == s);
    }
}

TEST_CASE("enumerate is row-major in state, ascending in action") {
    auto grid = make_env("grid-zone");
    auto pairs = enumerate(*grid);
    REQUIRE(pairs.size() == 125);
    CHECK(pairs[0].first.index == 0);
    CHECK(pairs[0].second == 0);
    CHECK(pairs[4].second == 4);
    CHECK(pairs[5].first.index == 1);

    auto chain = make_env("speed-chain");
    CHECK(enumerate(*chain).size() == 96);

    auto pm = make_env("point-mass");
    CHECK_THROWS_AS(enumerate(*pm), std::invalid_argument);
}

TEST_CASE("action validation") {
    auto grid = make_env("grid-zone");
    grid->reset(0);
    Action bad{};
    bad.index = 7;
    CHECK_THROWS_AS(grid->step(bad), std::out_of_range);

    auto pm = make_env("point-mass");
    pm->reset(0);
    Action oob{};
    oob.continuous = {1.5, 0.0};
    CHECK_THROWS_AS(pm->step(oob), std::out_of_range);
    Action wrong_dim{};
    wrong_dim.continuous = {0.0};
    CHECK_THROWS_AS(pm->step(wrong_dim), std::out_of_range);
}
