#pragma once

#include "parsvm/binary_model.hpp"
#include "parsvm/kernel.hpp"
#include "parsvm/parallel.hpp"
#include "parsvm/problem.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace parsvm {

struct smo_config {
    double c = 1.0;
    /// KKT tolerance; training stops once b_low <= b_up + 2 * tol.
    double tol = 1e-3;
    /// 0 selects max(10 * n, 10000).
    std::size_t max_iter = 0;
    /// Iterations between convergence tests.
    std::size_t check_interval = 64;
    double sv_epsilon = 1e-8;
    kernel_spec kernel;

    [[nodiscard]] std::size_t effective_max_iter(std::size_t n) const noexcept;
    /// Throws precondition_error when a field is out of range.
    void validate(std::size_t n) const;
};

/// Threads used by per-sample maps and reductions inside one binary solve.
struct execution {
    bool parallel = false;
    /// 0 selects default_thread_count().
    std::size_t threads = 0;

    [[nodiscard]] executor make_executor() const;
};

/// f_i = sum_j alpha_j y_j K(x_i, x_j) - y_i, together with the current extreme pair.
struct optimality_state {
    std::vector<double> alphas;
    std::vector<double> f;
    double b_up = 0.0;
    double b_low = 0.0;
    std::size_t i_up = 0;
    std::size_t i_low = 0;
};

struct violating_pair {
    std::size_t i_low;
    std::size_t i_up;
    double gap;

    friend bool operator==(const violating_pair &, const violating_pair &) = default;
};

/// alpha = 0, f = -y; i_up / i_low are the lowest indices with y = +1 / y = -1.
[[nodiscard]] optimality_state init_state(const binary_problem &problem, const smo_config &cfg);

/**
 * Maximal violating pair: i_up = argmin f over I_up, i_low = argmax f over I_low.
 *
 *   I_up  = { i : (alpha_i < C and y_i = +1) or (alpha_i > 0 and y_i = -1) }
 *   I_low = { i : (alpha_i < C and y_i = -1) or (alpha_i > 0 and y_i = +1) }
 *
 * Ties go to the lowest index; the reduction combine is partition independent. Returns nullopt when
 * either set is empty.
 */
[[nodiscard]] std::optional<violating_pair> select_violating_pair(const optimality_state &state,
                                                                  std::span<const int> labels, const smo_config &cfg,
                                                                  const executor *exec = nullptr);

/// Analytic two-variable step on (i_low, i_up) followed by the per-sample f update.
void update_pair(optimality_state &state, const matrix_view &samples, std::span<const int> labels,
                 const smo_config &cfg, std::size_t i_low, std::size_t i_up, const executor *exec = nullptr);
void update_pair(optimality_state &state, const binary_problem &problem, const smo_config &cfg, std::size_t i_low,
                 std::size_t i_up, const executor *exec = nullptr);

/// Called after every accepted pair update with the 1-based iteration number.
using smo_observer = std::function<void(std::size_t iteration, const optimality_state &state)>;

/// Runs select/update until the gap test passes at a check point or max_iter is reached.
/// A run that hits max_iter returns a model with info.converged = false.
[[nodiscard]] binary_model train_binary_smo(const binary_problem &problem, const smo_config &cfg,
                                            const execution &exec = {}, const smo_observer &observer = {});

struct kkt_report {
    std::size_t at_lower = 0;  ///< alpha = 0 but y f(x) < 1 - tol
    std::size_t free = 0;      ///< 0 < alpha < C but |y f(x) - 1| > tol
    std::size_t at_upper = 0;  ///< alpha = C but y f(x) > 1 + tol

    [[nodiscard]] std::size_t total() const noexcept { return at_lower + free + at_upper; }
};

/// KKT check of a trained model against the problem it was trained on. Multipliers within
/// the model's sv_epsilon of a bound count as on the bound.
[[nodiscard]] kkt_report kkt_violations(const binary_model &model, const binary_problem &problem, double tol,
                                        double sv_epsilon = 1e-8);

}  // namespace parsvm
