#pragma once

#include <span>

namespace rcrl::kernels {

// Batched dense-layer primitives. Each OpenMP kernel parallelizes over
// independent output elements and keeps every inner accumulation serial, so
// results are bitwise identical to the *_serial reference regardless of
// thread count. The serial twins are kept as the reference implementations
// for the equivalence tests and the benchmark.

// Y[b,o] = sum_i X[b,i] * W[o,i] + bias[o]
void affine_forward(std::span<const double> X, int batch, int in, std::span<const double> W,
                    std::span<const double> bias, int out, std::span<double> Y);
void affine_forward_serial(std::span<const double> X, int batch, int in,
                           std::span<const double> W, std::span<const double> bias, int out,
                           std::span<double> Y);

// dX[b,i] = sum_o dY[b,o] * W[o,i]
void affine_backward_input(std::span<const double> dY, int batch, int out,
                           std::span<const double> W, int in, std::span<double> dX);
void affine_backward_input_serial(std::span<const double> dY, int batch, int out,
                                  std::span<const double> W, int in, std::span<double> dX);

// dW[o,i] += sum_b dY[b,o] * X[b,i];  db[o] += sum_b dY[b,o]
void affine_backward_params(std::span<const double> X, std::span<const double> dY, int batch,
                            int in, int out, std::span<double> dW, std::span<double> db);
void affine_backward_params_serial(std::span<const double> X, std::span<const double> dY,
                                   int batch, int in, int out, std::span<double> dW,
                                   std::span<double> db);

// y = tanh(y), elementwise
void tanh_forward(std::span<double> Y);
void tanh_forward_serial(std::span<double> Y);

// Distributional Bellman projection, one row per batch element:
// the target distribution (atoms `z`, probabilities P[b,:]) is backed up
// through r[b] + gamma * (1 - done[b]) * z, clamped to the output support,
// and each backed-up atom's mass is split linearly between the two nearest
// output atoms.
void project_batch(std::span<const double> target_atoms, std::span<const double> P, int batch,
                   int n_target, std::span<const double> rewards, std::span<const unsigned char> done,
                   double gamma, std::span<const double> out_atoms, int n_out,
                   std::span<double> out);
void project_batch_serial(std::span<const double> target_atoms, std::span<const double> P,
                          int batch, int n_target, std::span<const double> rewards,
                          std::span<const unsigned char> done, double gamma,
                          std::span<const double> out_atoms, int n_out, std::span<double> out);

}  // namespace rcrl::kernels
