#include "rcrl/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcrl/kernels.hpp"

namespace rcrl {

void CategoricalGrid::rebuild() {
    if (n_atoms < 2 || !(v_max > v_min))
        throw std::invalid_argument("categorical grid needs >= 2 atoms and v_max > v_min");
    atoms.resize(n_atoms);
    const double dz = spacing();
    for (int i = 0; i < n_atoms; ++i) atoms[i] = v_min + dz * i;
    atoms.back() = v_max;
}

double CategoricalGrid::expectation(std::span<const double> probs) const {
    double v = 0.0;
    for (int i = 0; i < n_atoms; ++i) v += probs[i] * atoms[i];
    return v;
}

void project_target(const CategoricalGrid& grid, std::span<const double> target_atoms,
                    std::span<const double> target_probs, double reward, bool done, double gamma,
                    std::span<double> out) {
    double mass = 0.0;
    for (double p : target_probs) {
        if (p < 0.0) throw std::invalid_argument("target probabilities must be nonnegative");
        mass += p;
    }
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("target probabilities must sum to 1");

    unsigned char d = done ? 1 : 0;
    kernels::project_batch_serial(target_atoms, target_probs, 1,
                                  static_cast<int>(target_atoms.size()), std::span(&reward, 1),
                                  std::span(&d, 1), gamma, grid.atoms, grid.n_atoms, out);
}

void softmax_rows(std::span<double> logits, int batch, int n) {
    for (int b = 0; b < batch; ++b) {
        double* row = &logits[static_cast<std::size_t>(b) * n];
        const double m = *std::max_element(row, row + n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            row[i] = std::exp(row[i] - m);
            sum += row[i];
        }
        for (int i = 0; i < n; ++i) row[i] /= sum;
    }
}

}  // namespace rcrl
