#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "rcrl/kernels.hpp"
#include "rcrl/rng.hpp"

using namespace rcrl;

namespace {

std::vector<double> randn(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

}  // namespace

// the OpenMP kernels must agree with the serial references bitwise: each
// output element is produced by one thread with the same serial inner loop

TEST_CASE("affine forward parallel == serial") {
    Rng rng(1);
    const int B = 33, I = 17, O = 29;
    const auto X = randn(rng, B * I);
    const auto W = randn(rng, O * I);
    const auto bias = randn(rng, O);
    std::vector<double> y1(B * O), y2(B * O);
    kernels::affine_forward(X, B, I, W, bias, O, y1);
    kernels::affine_forward_serial(X, B, I, W, bias, O, y2);
    CHECK(y1 == y2);
}

TEST_CASE("affine backward input parallel == serial") {
    Rng rng(2);
    const int B = 19, I = 23, O = 13;
    const auto dY = randn(rng, B * O);
    const auto W = randn(rng, O * I);
    std::vector<double> d1(B * I), d2(B * I);
    kernels::affine_backward_input(dY, B, O, W, I, d1);
    kernels::affine_backward_input_serial(dY, B, O, W, I, d2);
    CHECK(d1 == d2);
}

TEST_CASE("affine backward params parallel == serial") {
    Rng rng(3);
    const int B = 21, I = 11, O = 27;
    const auto X = randn(rng, B * I);
    const auto dY = randn(rng, B * O);
    std::vector<double> dW1(O * I, 0.5), dW2(O * I, 0.5);  // accumulation semantics
    std::vector<double> db1(O, -0.25), db2(O, -0.25);
    kernels::affine_backward_params(X, dY, B, I, O, dW1, db1);
    kernels::affine_backward_params_serial(X, dY, B, I, O, dW2, db2);
    CHECK(dW1 == dW2);
    CHECK(db1 == db2);
}

TEST_CASE("tanh parallel == serial") {
    Rng rng(4);
    auto a = randn(rng, 1234);
    auto b = a;
    kernels::tanh_forward(a);
    kernels::tanh_forward_serial(b);
    CHECK(a == b);
}

TEST_CASE("projection parallel == serial") {
    Rng rng(5);
    const int B = 64, n = 51;
    std::vector<double> atoms(n);
    for (int i = 0; i < n; ++i) atoms[i] = -5.0 + 10.0 * i / (n - 1);

    std::vector<double> P(B * n);
    for (int b = 0; b < B; ++b) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            P[b * n + i] = rng.uniform();
            sum += P[b * n + i];
        }
        for (int i = 0; i < n; ++i) P[b * n + i] /= sum;
    }
    std::vector<double> rewards = randn(rng, B);
    std::vector<unsigned char> done(B);
    for (int b = 0; b < B; ++b) done[b] = rng.uniform() < 0.2 ? 1 : 0;

    std::vector<double> o1(B * n), o2(B * n);
    kernels::project_batch(atoms, P, B, n, rewards, done, 0.97, atoms, n, o1);
    kernels::project_batch_serial(atoms, P, B, n, rewards, done, 0.97, atoms, n, o2);
    CHECK(o1 == o2);
}
