#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rcrl/env.hpp"
#include "rcrl/replay.hpp"

using namespace rcrl;

namespace {

Transition make_transition(int tag, int k = 2) {
    Transition t;
    t.state.index = tag;
    t.state.values = {static_cast<double>(tag), 0.0};
    t.action.index = tag % 3;
    t.components.c.assign(k, 0.1 * tag);
    t.next_state.index = tag + 1;
    t.next_state.values = {static_cast<double>(tag + 1), 0.0};
    t.done = tag % 5 == 0;
    return t;
}

}  // namespace

TEST_CASE("ring semantics") {
    ReplayBuffer buf(4, 2);
    CHECK(buf.size() == 0);
    for (int i = 0; i < 5; ++i) buf.push(make_transition(i));
    CHECK(buf.size() == 4);
    // slot 0 now holds the newest transition; 1..3 survive
    bool found_oldest = false;
    for (std::size_t i = 0; i < buf.size(); ++i)
        if (buf.at(i).state.index == 0) found_oldest = true;
    CHECK_FALSE(found_oldest);
}

TEST_CASE("push validates component length") {
    ReplayBuffer buf(4, 2);
    CHECK_THROWS_AS(buf.push(make_transition(0, 3)), std::invalid_argument);
}

TEST_CASE("sampling") {
    ReplayBuffer buf(16, 2);
    Rng rng(1);
    CHECK_THROWS_AS(buf.sample_indices(rng, 1), std::runtime_error);

    buf.push(make_transition(7));
    const auto batch = buf.sample_batch(rng, 8);
    REQUIRE(batch.size() == 8);
    for (const auto& t : batch) CHECK(t.state.index == 7);

    Rng a(3), b(3);
    for (int i = 0; i < 10; ++i) buf.push(make_transition(i));
    CHECK(buf.sample_indices(a, 32) == buf.sample_indices(b, 32));
}

TEST_CASE("uniform draw frequencies") {
    ReplayBuffer buf(10, 2);
    for (int i = 0; i < 10; ++i) buf.push(make_transition(i));
    Rng rng(99);
    std::vector<long> counts(10, 0);
    const long draws = 100000;
    for (std::size_t i : buf.sample_indices(rng, draws)) counts[i]++;
    for (long c : counts) CHECK(std::abs(c / static_cast<double>(draws) - 0.1) < 0.01);
}

TEST_CASE("relabel") {
    auto env = make_env("speed-chain");
    const auto pool = make_arc_set(*env);

    std::vector<Transition> batch;
    env->reset(0);
    Action accel{};
    accel.index = 2;
    StateVec s = env->state();
    for (int i = 0; i < 6; ++i) {
        const StepResult r = env->step(accel);
        batch.push_back({s, accel, r.components, r.next_state, r.done});
        s = r.next_state;
    }

    SUBCASE("nominal ids reproduce the nominal scalar reward") {
        const std::vector<int> ids(batch.size(), 3);
        const auto rewards = relabel(batch, ids, pool);
        for (std::size_t i = 0; i < batch.size(); ++i)
            CHECK(rewards[i] == compose(env->descriptor().nominal, batch[i].components));
    }

    SUBCASE("doubling a linear parameterization doubles rewards exactly") {
        auto doubled = pool;
        for (auto& p : doubled)
            for (double& x : p.psi) x *= 2.0;
        const std::vector<int> ids(batch.size(), 2);
        const auto r1 = relabel(batch, ids, pool);
        const auto r2 = relabel(batch, ids, doubled);
        for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r2[i] == 2.0 * r1[i]);
    }

    SUBCASE("a target-2 one-hot pays exactly at velocity 2") {
        // after two accelerations from rest the realized velocity is 2
        const std::vector<int> ids(batch.size(), 2);
        const auto rewards = relabel(batch, ids, pool);
        CHECK(rewards[1] == 1.0);
        CHECK(rewards[0] == 0.0);
        CHECK(rewards[2] == 0.0);
    }

    SUBCASE("relabeling is idempotent and side-effect free") {
        const std::vector<int> ids = {0, 1, 2, 3, 0, 1};
        const auto r1 = relabel(batch, ids, pool);
        const auto r2 = relabel(batch, ids, pool);
        CHECK(r1 == r2);
    }

    SUBCASE("parallel relabeling matches the serial reference bitwise") {
        const std::vector<int> ids = {3, 2, 1, 0, 3, 2};
        CHECK(relabel(batch, ids, pool) == relabel_serial(batch, ids, pool));
    }

    SUBCASE("id range") {
        const std::vector<int> ids(batch.size(), 4);
        CHECK_THROWS_AS(relabel(batch, ids, pool), std::out_of_range);
    }

    SUBCASE("length mismatch") {
        const std::vector<int> ids(3, 0);
        CHECK_THROWS_AS(relabel(batch, ids, pool), std::invalid_argument);
    }
}

TEST_CASE("snapshot round-trip") {
    ReplayBuffer buf(8, 2);
    for (int i = 0; i < 6; ++i) {
        Transition t = make_transition(i);
        t.action.continuous = {0.25 * i, -0.5};
        buf.push(t);
    }
    const auto path = std::filesystem::temp_directory_path() / "rcrl_buffer_test.bin";
    buf.save(path.string());
    const ReplayBuffer loaded = ReplayBuffer::load(path.string());
    REQUIRE(loaded.size() == buf.size());
    CHECK(loaded.capacity() == buf.capacity());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        CHECK(loaded.at(i).state.index == buf.at(i).state.index);
        CHECK(loaded.at(i).state.values == buf.at(i).state.values);
        CHECK(loaded.at(i).action.index == buf.at(i).action.index);
        CHECK(loaded.at(i).action.continuous == buf.at(i).action.continuous);
        CHECK(loaded.at(i).components.c == buf.at(i).components.c);
        CHECK(loaded.at(i).next_state.index == buf.at(i).next_state.index);
        CHECK(loaded.at(i).done == buf.at(i).done);
    }
    std::filesystem::remove(path);
}
