#pragma once

#include <span>
#include <vector>

namespace rcrl {

// Fixed atom grid on [v_min, v_max] for distributional value heads.
struct CategoricalGrid {
    int n_atoms = 51;
    double v_min = -5.0;
    double v_max = 5.0;
    std::vector<double> atoms;

    CategoricalGrid() { rebuild(); }
    CategoricalGrid(int n, double lo, double hi) : n_atoms(n), v_min(lo), v_max(hi) { rebuild(); }

    double spacing() const { return (v_max - v_min) / (n_atoms - 1); }
    double expectation(std::span<const double> probs) const;

private:
    void rebuild();
};

// Projects one target distribution (own atom positions + probabilities)
// through the Bellman backup onto `grid`. Output sums to one.
void project_target(const CategoricalGrid& grid, std::span<const double> target_atoms,
                    std::span<const double> target_probs, double reward, bool done, double gamma,
                    std::span<double> out);

// softmax over each row of logits, in place
void softmax_rows(std::span<double> logits, int batch, int n);

}  // namespace rcrl
