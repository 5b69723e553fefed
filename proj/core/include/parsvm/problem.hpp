#pragma once

#include "parsvm/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace parsvm {

/**
 * Two-class restriction of a parent dataset with labels remapped to +1 / -1.
 *
 * A sample is labelled +1 iff its parent label equals `positive_class()`. The problem keeps a
 * pointer to its parent, which must outlive it.
 */
class binary_problem {
  public:
    /// Throws precondition_error on empty or duplicate indices, out-of-range indices or labels
    /// outside {positive_class, negative_class}.
    binary_problem(const dataset &parent, std::vector<std::size_t> indices, int positive_class, int negative_class);

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return parent_->num_features(); }
    [[nodiscard]] const dataset &parent() const noexcept { return *parent_; }
    [[nodiscard]] const std::vector<std::size_t> &indices() const noexcept { return indices_; }
    [[nodiscard]] std::span<const int> labels() const noexcept { return labels_; }
    [[nodiscard]] int positive_class() const noexcept { return positive_; }
    [[nodiscard]] int negative_class() const noexcept { return negative_; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return parent_->row(indices_[i]); }

    /// Copies the selected rows into a contiguous row-major buffer (size() x num_features()).
    [[nodiscard]] std::vector<double> gather_features() const;

    [[nodiscard]] bool has_both_signs() const noexcept;

  private:
    const dataset *parent_;
    std::vector<std::size_t> indices_;
    std::vector<int> labels_;
    int positive_;
    int negative_;
};

}  // namespace parsvm
