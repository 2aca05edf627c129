#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcrl/reward.hpp"
#include "rcrl/rng.hpp"
#include "rcrl/types.hpp"

namespace rcrl {

// Replayed experience. There is deliberately no scalar reward field:
// rewards are recomputed from the components at relabeling time.
struct Transition {
    StateVec state;
    Action action;
    RewardComponents components;
    StateVec next_state;
    bool done = false;
};

// Fixed-capacity ring with uniform with-replacement sampling.
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, int component_count);

    void push(const Transition& t);

    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    int component_count() const { return k_; }

    const Transition& at(std::size_t i) const { return ring_[i]; }

    std::vector<std::size_t> sample_indices(Rng& rng, int batch) const;
    std::vector<Transition> sample_batch(Rng& rng, int batch) const;

    // Flat little-endian binary snapshot; layout documented in replay.cpp.
    void save(const std::string& path) const;
    static ReplayBuffer load(const std::string& path);

private:
    std::size_t capacity_;
    int k_;
    std::vector<Transition> ring_;
    std::size_t cursor_ = 0;
    std::size_t size_ = 0;
};

// reward_i = compose(pool[ids[i]], batch[i].components); pure in its inputs.
std::vector<double> relabel(const std::vector<Transition>& batch, const std::vector<int>& ids,
                            const std::vector<Parameterization>& pool);
std::vector<double> relabel_serial(const std::vector<Transition>& batch,
                                   const std::vector<int>& ids,
                                   const std::vector<Parameterization>& pool);

// In-place variant over buffer indices, avoiding transition copies.
std::vector<double> relabel_indices(const ReplayBuffer& buf, const std::vector<std::size_t>& idx,
                                    const std::vector<int>& ids,
                                    const std::vector<Parameterization>& pool);

}  // namespace rcrl
