#include "rcrl/net.hpp"

#include <cmath>
#include <stdexcept>

#include "rcrl/kernels.hpp"

namespace rcrl {

void Mlp::Grads::zero() {
    for (auto& w : W) std::fill(w.begin(), w.end(), 0.0);
    for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

Mlp::Mlp(std::vector<int> sizes, bool tanh_output, Rng& init)
    : sizes_(std::move(sizes)), tanh_output_(tanh_output) {
    if (sizes_.size() < 2) throw std::invalid_argument("mlp needs at least input and output sizes");
    for (int l = 0; l + 1 < static_cast<int>(sizes_.size()); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        const double s = 1.0 / std::sqrt(static_cast<double>(in));
        std::vector<double> w(static_cast<std::size_t>(out) * in);
        for (double& x : w) x = init.uniform(-s, s);
        W_.push_back(std::move(w));
        b_.emplace_back(out, 0.0);
    }
}

void Mlp::forward(std::span<const double> X, int batch, Cache& cache) const {
    cache.batch = batch;
    cache.acts.resize(sizes_.size());
    cache.acts[0].assign(X.begin(), X.end());
    for (int l = 0; l < n_layers(); ++l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        cache.acts[l + 1].resize(static_cast<std::size_t>(batch) * out);
        kernels::affine_forward(cache.acts[l], batch, in, W_[l], b_[l], out, cache.acts[l + 1]);
        if (l + 1 < n_layers() || tanh_output_) kernels::tanh_forward(cache.acts[l + 1]);
    }
}

void Mlp::backward(const Cache& cache, std::span<const double> dY, Grads* grads,
                   std::vector<double>* dX) const {
    const int batch = cache.batch;
    std::vector<double> delta(dY.begin(), dY.end());
    for (int l = n_layers() - 1; l >= 0; --l) {
        const int in = sizes_[l], out = sizes_[l + 1];
        if (l + 1 < n_layers() || tanh_output_) {
            const auto& y = cache.acts[l + 1];
            for (std::size_t i = 0; i < delta.size(); ++i) delta[i] *= 1.0 - y[i] * y[i];
        }
        if (grads)
            kernels::affine_backward_params(cache.acts[l], delta, batch, in, out, grads->W[l],
                                            grads->b[l]);
        const bool need_dx = (l > 0) || (dX != nullptr);
        if (!need_dx) break;
        std::vector<double> dx(static_cast<std::size_t>(batch) * in);
        kernels::affine_backward_input(delta, batch, out, W_[l], in, dx);
        delta = std::move(dx);
    }
    if (dX) *dX = std::move(delta);
}

Mlp::Grads Mlp::make_grads() const {
    Grads g;
    for (int l = 0; l < n_layers(); ++l) {
        g.W.emplace_back(W_[l].size(), 0.0);
        g.b.emplace_back(b_[l].size(), 0.0);
    }
    return g;
}

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (int l = 0; l < n_layers(); ++l) n += W_[l].size() + b_[l].size();
    return n;
}

std::vector<std::span<double>> Mlp::param_blocks() {
    std::vector<std::span<double>> blocks;
    for (int l = 0; l < n_layers(); ++l) {
        blocks.emplace_back(W_[l]);
        blocks.emplace_back(b_[l]);
    }
    return blocks;
}

std::vector<std::span<const double>> Mlp::param_blocks() const {
    std::vector<std::span<const double>> blocks;
    for (int l = 0; l < n_layers(); ++l) {
        blocks.emplace_back(W_[l]);
        blocks.emplace_back(b_[l]);
    }
    return blocks;
}

std::vector<std::span<double>> Mlp::grad_blocks(Grads& g) {
    std::vector<std::span<double>> blocks;
    for (std::size_t l = 0; l < g.W.size(); ++l) {
        blocks.emplace_back(g.W[l]);
        blocks.emplace_back(g.b[l]);
    }
    return blocks;
}

void SgdMomentum::step(std::vector<std::span<double>> params,
                       std::vector<std::span<const double>> grads) {
    if (params.size() != grads.size()) throw std::invalid_argument("optimizer: block count mismatch");
    if (velocity_.size() != params.size()) {
        velocity_.clear();
        for (const auto& p : params) velocity_.emplace_back(p.size(), 0.0);
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto& v = velocity_[k];
        auto& p = params[k];
        const auto& g = grads[k];
        for (std::size_t i = 0; i < p.size(); ++i) {
            v[i] = momentum_ * v[i] + g[i];
            p[i] -= lr_ * v[i];
        }
    }
}

void HeadedNet::Grads::zero() {
    trunk.zero();
    for (auto& w : head_W) std::fill(w.begin(), w.end(), 0.0);
    for (auto& v : head_b) std::fill(v.begin(), v.end(), 0.0);
}

HeadedNet::HeadedNet(int in_dim, std::vector<int> hidden, int out_dim, int n_heads, Rng& init)
    : out_dim_(out_dim) {
    if (hidden.empty()) throw std::invalid_argument("headed net needs at least one hidden layer");
    if (n_heads < 1) throw std::invalid_argument("headed net needs at least one head");
    std::vector<int> trunk_sizes;
    trunk_sizes.push_back(in_dim);
    for (int h : hidden) trunk_sizes.push_back(h);
    trunk_ = Mlp(std::move(trunk_sizes), /*tanh_output=*/true, init);

    const int h = hidden.back();
    const double s = 1.0 / std::sqrt(static_cast<double>(h));
    for (int i = 0; i < n_heads; ++i) {
        std::vector<double> w(static_cast<std::size_t>(out_dim) * h);
        for (double& x : w) x = init.uniform(-s, s);
        head_W_.push_back(std::move(w));
        head_b_.emplace_back(out_dim, 0.0);
    }
}

void HeadedNet::forward(std::span<const double> X, int batch, std::span<const int> head_ids,
                        Cache& cache) const {
    trunk_.forward(X, batch, cache.trunk);
    const auto& h = trunk_.output(cache.trunk);
    const int hd = trunk_.output_dim();

    cache.heads.assign(head_ids.begin(), head_ids.end());
    cache.out.resize(static_cast<std::size_t>(batch) * out_dim_);
    for (int b = 0; b < batch; ++b) {
        const int head = head_ids[b];
        if (head < 0 || head >= n_heads()) throw std::out_of_range("headed net: head id out of range");
        const double* hb = &h[static_cast<std::size_t>(b) * hd];
        const auto& W = head_W_[head];
        const auto& bias = head_b_[head];
        double* y = &cache.out[static_cast<std::size_t>(b) * out_dim_];
        for (int o = 0; o < out_dim_; ++o) {
            double acc = bias[o];
            const double* w = &W[static_cast<std::size_t>(o) * hd];
            for (int i = 0; i < hd; ++i) acc += w[i] * hb[i];
            y[o] = acc;
        }
    }
}

void HeadedNet::backward(const Cache& cache, std::span<const double> dY, Grads* grads,
                         std::vector<double>* dX) const {
    const int batch = cache.trunk.batch;
    const int hd = trunk_.output_dim();
    const auto& h = trunk_.output(cache.trunk);

    std::vector<double> dh(static_cast<std::size_t>(batch) * hd, 0.0);
    for (int b = 0; b < batch; ++b) {
        const int head = cache.heads[b];
        const double* dy = &dY[static_cast<std::size_t>(b) * out_dim_];
        const double* hb = &h[static_cast<std::size_t>(b) * hd];
        const auto& W = head_W_[head];
        double* dhb = &dh[static_cast<std::size_t>(b) * hd];
        for (int o = 0; o < out_dim_; ++o) {
            const double g = dy[o];
            const double* w = &W[static_cast<std::size_t>(o) * hd];
            if (grads) {
                double* dw = &grads->head_W[head][static_cast<std::size_t>(o) * hd];
                for (int i = 0; i < hd; ++i) dw[i] += g * hb[i];
                grads->head_b[head][o] += g;
            }
            for (int i = 0; i < hd; ++i) dhb[i] += g * w[i];
        }
    }
    trunk_.backward(cache.trunk, dh, grads ? &grads->trunk : nullptr, dX);
}

HeadedNet::Grads HeadedNet::make_grads() const {
    Grads g;
    g.trunk = trunk_.make_grads();
    for (std::size_t i = 0; i < head_W_.size(); ++i) {
        g.head_W.emplace_back(head_W_[i].size(), 0.0);
        g.head_b.emplace_back(head_b_[i].size(), 0.0);
    }
    return g;
}

std::vector<std::span<double>> HeadedNet::param_blocks() {
    auto blocks = trunk_.param_blocks();
    for (std::size_t i = 0; i < head_W_.size(); ++i) {
        blocks.emplace_back(head_W_[i]);
        blocks.emplace_back(head_b_[i]);
    }
    return blocks;
}

std::vector<std::span<const double>> HeadedNet::param_blocks() const {
    auto blocks = static_cast<const Mlp&>(trunk_).param_blocks();
    for (std::size_t i = 0; i < head_W_.size(); ++i) {
        blocks.emplace_back(head_W_[i]);
        blocks.emplace_back(head_b_[i]);
    }
    return blocks;
}

std::vector<std::span<double>> HeadedNet::grad_blocks(Grads& g) {
    auto blocks = Mlp::grad_blocks(g.trunk);
    for (std::size_t i = 0; i < g.head_W.size(); ++i) {
        blocks.emplace_back(g.head_W[i]);
        blocks.emplace_back(g.head_b[i]);
    }
    return blocks;
}

void HeadedNet::track(const HeadedNet& src, double tau) {
    auto dst_blocks = param_blocks();
    auto src_blocks = src.param_blocks();
    for (std::size_t k = 0; k < dst_blocks.size(); ++k)
        for (std::size_t i = 0; i < dst_blocks[k].size(); ++i)
            dst_blocks[k][i] += tau * (src_blocks[k][i] - dst_blocks[k][i]);
}

}  // namespace rcrl
