#pragma once

#include "parsvm/binary_model.hpp"
#include "parsvm/kernel.hpp"
#include "parsvm/problem.hpp"
#include "parsvm/smo_solver.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace parsvm {

/// Feasible set each gradient step is projected onto.
enum class gd_projection {
    /// 0 <= alpha <= C and sum alpha_i y_i = 0, the full dual feasible set.
    feasible,
    /// 0 <= alpha <= C only; the equality constraint is left to the bias recovery.
    box,
};

[[nodiscard]] std::string_view to_string(gd_projection p) noexcept;
/// Accepts "feasible" and "box".
[[nodiscard]] gd_projection parse_gd_projection(std::string_view name);

/// Fixed-step, full-batch projected gradient ascent on the dual.
struct gd_config {
    double learning_rate = 0.01;
    std::size_t epochs = 1000;
    double c = 1.0;
    kernel_spec kernel;
    double sv_epsilon = 1e-8;
    std::size_t gram_cap = default_gram_cap;
    gd_projection projection = gd_projection::feasible;

    void validate() const;
};

/// W(alpha) = sum_i alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
[[nodiscard]] double dual_objective(std::span<const double> alphas, std::span<const int> labels,
                                    const gram_matrix &gram);

/// dW/dalpha_i = 1 - y_i sum_j alpha_j y_j K_ij, one independent row product per sample.
[[nodiscard]] std::vector<double> dual_gradient(std::span<const double> alphas, std::span<const int> labels,
                                                const gram_matrix &gram, const executor *exec = nullptr);

[[nodiscard]] std::vector<double> project_box(std::vector<double> alphas, double c);

/**
 * Euclidean projection onto { 0 <= alpha <= C, sum alpha_i y_i = 0 }.
 *
 * The result is clamp(alpha_i - lambda y_i, 0, C) for the multiplier lambda that zeroes the
 * equality residual; lambda is found by bisection since the residual is monotone in it.
 * With a single label sign the feasible set is {0}.
 */
[[nodiscard]] std::vector<double> project_feasible(std::vector<double> alphas, std::span<const int> labels, double c);

using gd_observer = std::function<void(std::size_t epoch, std::span<const double> alphas)>;

[[nodiscard]] binary_model train_binary_gd(const binary_problem &problem, const gd_config &cfg,
                                           const execution &exec = {}, const gd_observer &observer = {});

}  // namespace parsvm
