#pragma once

#include <span>
#include <vector>

#include "rcrl/rng.hpp"

namespace rcrl {

// Dense feed-forward network: tanh hidden layers, linear output (tanh on the
// output too when tanh_output is set). Parameters are plain vectors; the
// forward pass caches post-activations so the backward pass can run without
// recomputation. All batched loops go through the kernels in kernels.hpp.
class Mlp {
public:
    struct Grads {
        std::vector<std::vector<double>> W, b;
        void zero();
    };

    struct Cache {
        int batch = 0;
        // acts[0] is the input, acts[l+1] the post-activation of layer l
        std::vector<std::vector<double>> acts;
    };

    Mlp() = default;
    Mlp(std::vector<int> sizes, bool tanh_output, Rng& init);

    int input_dim() const { return sizes_.front(); }
    int output_dim() const { return sizes_.back(); }
    int n_layers() const { return static_cast<int>(sizes_.size()) - 1; }
    const std::vector<int>& sizes() const { return sizes_; }

    void forward(std::span<const double> X, int batch, Cache& cache) const;
    const std::vector<double>& output(const Cache& cache) const { return cache.acts.back(); }

    // Consumes dL/dY, accumulates parameter gradients into `grads` (if given)
    // and writes dL/dX into `dX` (if given).
    void backward(const Cache& cache, std::span<const double> dY, Grads* grads,
                  std::vector<double>* dX) const;

    Grads make_grads() const;
    std::size_t param_count() const;

    // Mutable views over every parameter block, in a fixed order; used by the
    // optimizer, serialization and the finite-difference checks.
    std::vector<std::span<double>> param_blocks();
    std::vector<std::span<const double>> param_blocks() const;
    static std::vector<std::span<double>> grad_blocks(Grads& g);

private:
    std::vector<int> sizes_;
    bool tanh_output_ = false;
    std::vector<std::vector<double>> W_;  // layer l: sizes[l+1] x sizes[l], row-major
    std::vector<std::vector<double>> b_;
};

// Plain SGD with momentum. reset() drops the velocity buffers, which is the
// optimizer-state reinitialization used by the transfer protocol.
class SgdMomentum {
public:
    SgdMomentum(double lr, double momentum) : lr_(lr), momentum_(momentum) {}

    void step(std::vector<std::span<double>> params, std::vector<std::span<const double>> grads);
    void reset() { velocity_.clear(); }

    double lr() const { return lr_; }

private:
    double lr_, momentum_;
    std::vector<std::vector<double>> velocity_;
};

// Shared trunk with one affine output head per parameterization id. With a
// single head this is an ordinary MLP split before its output layer; with
// several heads, each sample is routed by id and gradients reach only the
// selected head plus the shared trunk.
class HeadedNet {
public:
    struct Grads {
        Mlp::Grads trunk;
        std::vector<std::vector<double>> head_W, head_b;
        void zero();
    };

    struct Cache {
        Mlp::Cache trunk;
        std::vector<int> heads;     // head index per sample
        std::vector<double> out;    // batch x out_dim
    };

    HeadedNet() = default;
    HeadedNet(int in_dim, std::vector<int> hidden, int out_dim, int n_heads, Rng& init);

    int input_dim() const { return trunk_.input_dim(); }
    int output_dim() const { return out_dim_; }
    int n_heads() const { return static_cast<int>(head_W_.size()); }

    void forward(std::span<const double> X, int batch, std::span<const int> head_ids,
                 Cache& cache) const;
    const std::vector<double>& output(const Cache& cache) const { return cache.out; }

    void backward(const Cache& cache, std::span<const double> dY, Grads* grads,
                  std::vector<double>* dX) const;

    Grads make_grads() const;
    std::vector<std::span<double>> param_blocks();
    std::vector<std::span<const double>> param_blocks() const;
    static std::vector<std::span<double>> grad_blocks(Grads& g);

    // Polyak averaging of `src` into this net: p <- (1 - tau) p + tau p_src.
    void track(const HeadedNet& src, double tau);

private:
    Mlp trunk_;  // tanh output: ends at the last hidden layer
    int out_dim_ = 0;
    std::vector<std::vector<double>> head_W_;  // out_dim x trunk_out
    std::vector<std::vector<double>> head_b_;  // out_dim
};

}  // namespace rcrl
