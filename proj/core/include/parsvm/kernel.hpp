#pragma once

#include "parsvm/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parsvm {

class executor;

enum class kernel_kind { linear, rbf };

[[nodiscard]] std::string_view to_string(kernel_kind kind) noexcept;
/// Accepts "linear" and "rbf".
[[nodiscard]] kernel_kind parse_kernel_kind(std::string_view name);

struct kernel_spec {
    kernel_kind kind = kernel_kind::linear;
    /// Width of the RBF kernel exp(-gamma * |x - y|^2); ignored for the linear kernel.
    double gamma = 1.0;

    [[nodiscard]] static kernel_spec linear() noexcept { return {kernel_kind::linear, 1.0}; }
    /// Throws precondition_error unless gamma > 0.
    [[nodiscard]] static kernel_spec rbf(double gamma);
    /// RBF with the scale-neutral default gamma = 1 / d.
    [[nodiscard]] static kernel_spec rbf_default(std::size_t num_features);

    friend bool operator==(const kernel_spec &, const kernel_spec &) = default;
};

/// Default cap on materialized Gram entries (n * n).
inline constexpr std::size_t default_gram_cap = 100'000'000;

/// Kernel value without shape checks; callers guarantee equal lengths.
[[nodiscard]] double kernel_value(const kernel_spec &spec, std::span<const double> x,
                                  std::span<const double> y) noexcept;

/// Checked kernel evaluation.
[[nodiscard]] double kernel_eval(const kernel_spec &spec, std::span<const double> x, std::span<const double> y);

/// K(x_i, x_j) for every row j. The per-sample map runs on `exec` when given.
[[nodiscard]] std::vector<double> kernel_row(const kernel_spec &spec, const matrix_view &samples, std::size_t i,
                                             const executor *exec = nullptr);

/// Dense symmetric Gram matrix, row-major.
class gram_matrix {
  public:
    gram_matrix() = default;
    gram_matrix(std::size_t n, std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }
    [[nodiscard]] const std::vector<double> &values() const noexcept { return values_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

/// Throws gram_cap_error when n * n exceeds `cap`; use kernel_row for large problems.
[[nodiscard]] gram_matrix compute_gram(const kernel_spec &spec, const matrix_view &samples,
                                       std::size_t cap = default_gram_cap, const executor *exec = nullptr);

}  // namespace parsvm
