#include "rcrl/replay.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rcrl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int component_count)
    : capacity_(capacity), k_(component_count) {
    if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
    ring_.resize(capacity);
}

void ReplayBuffer::push(const Transition& t) {
    if (static_cast<int>(t.components.c.size()) != k_)
        throw std::invalid_argument("replay push: component length mismatch");
    ring_[cursor_] = t;
    cursor_ = (cursor_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(Rng& rng, int batch) const {
    if (size_ == 0) throw std::runtime_error("replay sample: buffer is empty");
    std::vector<std::size_t> idx(batch);
    for (int i = 0; i < batch; ++i)
        idx[i] = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(size_)));
    return idx;
}

std::vector<Transition> ReplayBuffer::sample_batch(Rng& rng, int batch) const {
    std::vector<Transition> out;
    out.reserve(batch);
    for (std::size_t i : sample_indices(rng, batch)) out.push_back(ring_[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Snapshot layout (little-endian):
//   magic "RCRB", u32 version = 1
//   u32 state_dim, u32 action_dim (continuous entries; 0 for discrete-only),
//   u32 k, u64 capacity, u64 size, u64 cursor
//   then `size` records, each:
//     state values   state_dim  f64
//     state index    i64
//     action index   i64
//     action values  action_dim f64
//     components     k          f64
//     next values    state_dim  f64
//     next index     i64
//     done           u8
// ---------------------------------------------------------------------------

namespace {

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void put_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::ifstream& in, std::size_t n) {
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    return v;
}

}  // namespace

void ReplayBuffer::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write buffer snapshot: " + path);

    const std::size_t state_dim = size_ ? ring_[0].state.values.size() : 0;
    const std::size_t action_dim = size_ ? ring_[0].action.continuous.size() : 0;

    out.write("RCRB", 4);
    put<uint32_t>(out, 1);
    put<uint32_t>(out, static_cast<uint32_t>(state_dim));
    put<uint32_t>(out, static_cast<uint32_t>(action_dim));
    put<uint32_t>(out, static_cast<uint32_t>(k_));
    put<uint64_t>(out, capacity_);
    put<uint64_t>(out, size_);
    put<uint64_t>(out, cursor_);

    for (std::size_t i = 0; i < size_; ++i) {
        const Transition& t = ring_[i];
        put_doubles(out, t.state.values);
        put<int64_t>(out, t.state.index);
        put<int64_t>(out, t.action.index);
        put_doubles(out, t.action.continuous);
        put_doubles(out, t.components.c);
        put_doubles(out, t.next_state.values);
        put<int64_t>(out, t.next_state.index);
        put<uint8_t>(out, t.done ? 1 : 0);
    }
    if (!out) throw std::runtime_error("write error on buffer snapshot: " + path);
}

ReplayBuffer ReplayBuffer::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read buffer snapshot: " + path);

    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, "RCRB", 4) != 0)
        throw std::runtime_error("not a buffer snapshot: " + path);
    if (get<uint32_t>(in) != 1) throw std::runtime_error("unsupported snapshot version");

    const auto state_dim = get<uint32_t>(in);
    const auto action_dim = get<uint32_t>(in);
    const auto k = get<uint32_t>(in);
    const auto capacity = get<uint64_t>(in);
    const auto size = get<uint64_t>(in);
    const auto cursor = get<uint64_t>(in);

    ReplayBuffer buf(capacity, static_cast<int>(k));
    for (uint64_t i = 0; i < size; ++i) {
        Transition t;
        t.state.values = get_doubles(in, state_dim);
        t.state.index = static_cast<int>(get<int64_t>(in));
        t.action.index = static_cast<int>(get<int64_t>(in));
        t.action.continuous = get_doubles(in, action_dim);
        t.components.c = get_doubles(in, k);
        t.next_state.values = get_doubles(in, state_dim);
        t.next_state.index = static_cast<int>(get<int64_t>(in));
        t.done = get<uint8_t>(in) != 0;
        buf.ring_[i] = std::move(t);
    }
    buf.size_ = size;
    buf.cursor_ = cursor;
    if (!in) throw std::runtime_error("read error on buffer snapshot: " + path);
    return buf;
}

namespace {

double relabel_one(const Transition& t, int id, const std::vector<Parameterization>& pool) {
    if (id < 0 || id >= static_cast<int>(pool.size()))
        throw std::out_of_range("relabel: parameterization id out of pool range");
    return compose(pool[id], t.components);
}

}  // namespace

std::vector<double> relabel_serial(const std::vector<Transition>& batch,
                                   const std::vector<int>& ids,
                                   const std::vector<Parameterization>& pool) {
    if (batch.size() != ids.size())
        throw std::invalid_argument("relabel: batch and id count mismatch");
    std::vector<double> rewards(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) rewards[i] = relabel_one(batch[i], ids[i], pool);
    return rewards;
}

std::vector<double> relabel(const std::vector<Transition>& batch, const std::vector<int>& ids,
                            const std::vector<Parameterization>& pool) {
    if (batch.size() != ids.size())
        throw std::invalid_argument("relabel: batch and id count mismatch");
    const long n = static_cast<long>(batch.size());
    for (long i = 0; i < n; ++i)
        if (ids[i] < 0 || ids[i] >= static_cast<int>(pool.size()))
            throw std::out_of_range("relabel: parameterization id out of pool range");
    std::vector<double> rewards(batch.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) rewards[i] = compose(pool[ids[i]], batch[i].components);
    return rewards;
}

std::vector<double> relabel_indices(const ReplayBuffer& buf, const std::vector<std::size_t>& idx,
                                    const std::vector<int>& ids,
                                    const std::vector<Parameterization>& pool) {
    if (idx.size() != ids.size())
        throw std::invalid_argument("relabel: batch and id count mismatch");
    std::vector<double> rewards(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        rewards[i] = relabel_one(buf.at(idx[i]), ids[i], pool);
    return rewards;
}

}  // namespace rcrl
