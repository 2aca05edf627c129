#include "rcrl/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace rcrl::kernels {

namespace {

inline double dot(const double* a, const double* b, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

inline void project_row(const double* target_atoms, const double* probs, int n_target, double r,
                        bool done, double gamma, const double* out_atoms, int n_out, double dz,
                        double* out) {
    std::fill(out, out + n_out, 0.0);
    const double scale = done ? 0.0 : gamma;
    const double v_min = out_atoms[0];
    const double v_max = out_atoms[n_out - 1];
    for (int j = 0; j < n_target; ++j) {
        const double p = probs[j];
        if (p == 0.0) continue;
        double t = r + scale * target_atoms[j];
        t = std::clamp(t, v_min, v_max);
        const double pos = (t - v_min) / dz;
        const int lo = static_cast<int>(std::floor(pos));
        const int hi = std::min(lo + 1, n_out - 1);
        const double frac = pos - lo;
        out[lo] += p * (1.0 - frac);
        out[hi] += p * frac;
    }
}

}  // namespace

void affine_forward_serial(std::span<const double> X, int batch, int in,
                           std::span<const double> W, std::span<const double> bias, int out,
                           std::span<double> Y) {
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < out; ++o)
            Y[static_cast<std::size_t>(b) * out + o] =
                bias[o] + dot(&X[static_cast<std::size_t>(b) * in], &W[static_cast<std::size_t>(o) * in], in);
}

void affine_forward(std::span<const double> X, int batch, int in, std::span<const double> W,
                    std::span<const double> bias, int out, std::span<double> Y) {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < batch; ++b)
        for (int o = 0; o < out; ++o)
            Y[static_cast<std::size_t>(b) * out + o] =
                bias[o] + dot(&X[static_cast<std::size_t>(b) * in], &W[static_cast<std::size_t>(o) * in], in);
}

void affine_backward_input_serial(std::span<const double> dY, int batch, int out,
                                  std::span<const double> W, int in, std::span<double> dX) {
    for (int b = 0; b < batch; ++b) {
        double* dx = &dX[static_cast<std::size_t>(b) * in];
        const double* dy = &dY[static_cast<std::size_t>(b) * out];
        std::fill(dx, dx + in, 0.0);
        for (int o = 0; o < out; ++o) {
            const double g = dy[o];
            const double* w = &W[static_cast<std::size_t>(o) * in];
            for (int i = 0; i < in; ++i) dx[i] += g * w[i];
        }
    }
}

void affine_backward_input(std::span<const double> dY, int batch, int out,
                           std::span<const double> W, int in, std::span<double> dX) {
#pragma omp parallel for schedule(static)
    for (int b = 0; b < batch; ++b) {
        double* dx = &dX[static_cast<std::size_t>(b) * in];
        const double* dy = &dY[static_cast<std::size_t>(b) * out];
        std::fill(dx, dx + in, 0.0);
        for (int o = 0; o < out; ++o) {
            const double g = dy[o];
            const double* w = &W[static_cast<std::size_t>(o) * in];
            for (int i = 0; i < in; ++i) dx[i] += g * w[i];
        }
    }
}

void affine_backward_params_serial(std::span<const double> X, std::span<const double> dY,
                                   int batch, int in, int out, std::span<double> dW,
                                   std::span<double> db) {
    for (int o = 0; o < out; ++o) {
        double* dw = &dW[static_cast<std::size_t>(o) * in];
        double acc_b = 0.0;
        for (int b = 0; b < batch; ++b) {
            const double g = dY[static_cast<std::size_t>(b) * out + o];
            acc_b += g;
            const double* x = &X[static_cast<std::size_t>(b) * in];
            for (int i = 0; i < in; ++i) dw[i] += g * x[i];
        }
        db[o] += acc_b;
    }
}

void affine_backward_params(std::span<const double> X, std::span<const double> dY, int batch,
                            int in, int out, std::span<double> dW, std::span<double> db) {
    // one thread owns each output row, so the batch accumulation order
    // matches the serial reference exactly
#pragma omp parallel for schedule(static)
    for (int o = 0; o < out; ++o) {
        double* dw = &dW[static_cast<std::size_t>(o) * in];
        double acc_b = 0.0;
        for (int b = 0; b < batch; ++b) {
            const double g = dY[static_cast<std::size_t>(b) * out + o];
            acc_b += g;
            const double* x = &X[static_cast<std::size_t>(b) * in];
            for (int i = 0; i < in; ++i) dw[i] += g * x[i];
        }
        db[o] += acc_b;
    }
}

void tanh_forward_serial(std::span<double> Y) {
    for (double& y : Y) y = std::tanh(y);
}

void tanh_forward(std::span<double> Y) {
    const long n = static_cast<long>(Y.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) Y[i] = std::tanh(Y[i]);
}

void project_batch_serial(std::span<const double> target_atoms, std::span<const double> P,
                          int batch, int n_target, std::span<const double> rewards,
                          std::span<const unsigned char> done, double gamma,
                          std::span<const double> out_atoms, int n_out, std::span<double> out) {
    const double dz = (out_atoms[n_out - 1] - out_atoms[0]) / (n_out - 1);
    for (int b = 0; b < batch; ++b)
        project_row(target_atoms.data(), &P[static_cast<std::size_t>(b) * n_target], n_target,
                    rewards[b], done[b] != 0, gamma, out_atoms.data(), n_out, dz,
                    &out[static_cast<std::size_t>(b) * n_out]);
}

void project_batch(std::span<const double> target_atoms, std::span<const double> P, int batch,
                   int n_target, std::span<const double> rewards,
                   std::span<const unsigned char> done, double gamma,
                   std::span<const double> out_atoms, int n_out, std::span<double> out) {
    const double dz = (out_atoms[n_out - 1] - out_atoms[0]) / (n_out - 1);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < batch; ++b)
        project_row(target_atoms.data(), &P[static_cast<std::size_t>(b) * n_target], n_target,
                    rewards[b], done[b] != 0, gamma, out_atoms.data(), n_out, dz,
                    &out[static_cast<std::size_t>(b) * n_out]);
}

}  // namespace rcrl::kernels
