#pragma once

#include "parsvm/binary_model.hpp"
#include "parsvm/dataset.hpp"
#include "parsvm/gd_solver.hpp"
#include "parsvm/parallel.hpp"
#include "parsvm/problem.hpp"
#include "parsvm/smo_solver.hpp"

#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace parsvm {

enum class solver_id { smo, gd };

[[nodiscard]] std::string_view to_string(solver_id s) noexcept;
/// Accepts "smo" and "gd".
[[nodiscard]] solver_id parse_solver_id(std::string_view name);

/// Ordered class pair, first < second. The first class is the +1 side of its binary problem.
struct class_pair {
    int first = 0;
    int second = 1;

    friend auto operator<=>(const class_pair &, const class_pair &) = default;
};

/// (0,1), (0,2), ..., (m-2, m-1); m (m - 1) / 2 entries.
[[nodiscard]] std::vector<class_pair> enumerate_pairs(std::size_t m);

/// Index of `pair` in enumerate_pairs(m).
[[nodiscard]] std::size_t pair_index(class_pair pair, std::size_t m);

/// All samples of the two classes, in dataset order; +1 for pair.first.
[[nodiscard]] binary_problem build_binary_problem(const dataset &ds, class_pair pair);

struct trainer_config {
    solver_id solver = solver_id::smo;
    smo_config smo;
    gd_config gd;
    execution exec;
};

/// Trains one binary problem with the configured solver.
[[nodiscard]] binary_model train_binary(const binary_problem &problem, const trainer_config &cfg);

struct multiclass_model {
    std::size_t num_classes = 0;
    std::size_t num_features = 0;
    solver_id solver = solver_id::smo;
    /// One model per entry of enumerate_pairs(num_classes), in that order.
    std::vector<binary_model> models;
    /// Training wall-clock per pair in seconds; not persisted.
    std::vector<double> job_seconds;

    [[nodiscard]] const binary_model &model(class_pair pair) const;
    [[nodiscard]] double converged_fraction() const noexcept;
};

/**
 * One-vs-one training: every pair is an independent job on the worker pool.
 *
 * Results are stored by pair index, so the assembled model does not depend on the number of
 * workers, the schedule or completion order. A failing job aborts training with a
 * precondition_error naming the pair.
 */
[[nodiscard]] multiclass_model train_one_vs_one(const dataset &ds, const trainer_config &cfg,
                                                const pool_config &pool = {});

/// Highest vote count; ties resolve to the lowest class id.
[[nodiscard]] int vote_winner(std::span<const std::size_t> votes);

/// Each pair votes for pair.first when its decision value is >= 0, else for pair.second.
[[nodiscard]] int predict_multiclass(const multiclass_model &model, std::span<const double> x);

[[nodiscard]] double evaluate_accuracy(const multiclass_model &model, const dataset &ds);

}  // namespace parsvm
