#pragma once

#include "parsvm/kernel.hpp"
#include "parsvm/problem.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace parsvm {

struct training_info {
    std::size_t iterations = 0;
    bool converged = false;
    /// b_low - b_up at the end of training.
    double gap = 0.0;
    double dual_objective = 0.0;

    friend bool operator==(const training_info &, const training_info &) = default;
};

/**
 * Trained two-class kernel expansion: f(x) = sum_i w_i K(sv_i, x) + bias, with w_i = alpha_i y_i.
 *
 * `alphas` and `support_indices` describe the training run (indices into the training problem)
 * and are not part of the persisted model.
 */
struct binary_model {
    kernel_spec kernel;
    double c = 1.0;
    std::size_t num_features = 0;
    std::vector<double> support_vectors;  ///< row-major, num_support() x num_features
    std::vector<double> weights;
    double bias = 0.0;
    training_info info;

    std::vector<double> alphas;
    std::vector<std::size_t> support_indices;

    [[nodiscard]] std::size_t num_support() const noexcept { return weights.size(); }
    [[nodiscard]] std::span<const double> support_vector(std::size_t s) const noexcept {
        return { support_vectors.data() + s * num_features, num_features };
    }
};

/// Collects {i : alpha_i > sv_epsilon} of `problem` into a model.
[[nodiscard]] binary_model make_binary_model(const binary_problem &problem, std::vector<double> alphas, double bias,
                                             const kernel_spec &kernel, double c, double sv_epsilon,
                                             training_info info);

/// Throws dimension_error when x does not have the model's feature count.
[[nodiscard]] double decision_value(const binary_model &model, std::span<const double> x);

}  // namespace parsvm
