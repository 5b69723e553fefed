#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace parsvm {

/// Non-owning row-major view of an n x d real matrix.
struct matrix_view {
    std::span<const double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return data.subspan(i * cols, cols);
    }
};

/// Per-feature z-score parameters (population standard deviation).
struct normalization_stats {
    std::vector<double> mean;
    std::vector<double> stddev;
};

/**
 * Dense labelled training data.
 *
 * Features are stored row-major (n rows of d values). Labels are contiguous class ids in [0, m);
 * `class_values()` keeps the original label value of every class id in ascending order so that
 * predictions can be reported in the encoding of the input file.
 *
 * A dataset is immutable after construction.
 */
class dataset {
  public:
    dataset() = default;
    /// Validates shapes, finiteness and label range; throws precondition_error otherwise.
    dataset(std::vector<double> features, std::size_t num_features, std::vector<int> labels,
            std::vector<double> class_values, bool normalized = false);

    [[nodiscard]] std::size_t num_samples() const noexcept { return labels_.size(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return num_features_; }
    [[nodiscard]] std::size_t num_classes() const noexcept { return class_values_.size(); }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {features_.data() + i * num_features_, num_features_};
    }
    [[nodiscard]] int label(std::size_t i) const noexcept { return labels_[i]; }
    [[nodiscard]] const std::vector<int> &labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<double> &features() const noexcept { return features_; }
    [[nodiscard]] const std::vector<double> &class_values() const noexcept { return class_values_; }
    [[nodiscard]] bool is_normalized() const noexcept { return normalized_; }

    [[nodiscard]] matrix_view view() const noexcept {
        return {features_, num_samples(), num_features_};
    }

    /// Number of samples per class id.
    [[nodiscard]] std::vector<std::size_t> class_counts() const;

    friend bool operator==(const dataset &, const dataset &) = default;

  private:
    std::vector<double> features_;
    std::size_t num_features_ = 0;
    std::vector<int> labels_;
    std::vector<double> class_values_;
    bool normalized_ = false;
};

/// Maps raw label values onto contiguous ids, preserving ascending order.
/// Returns the ids and the sorted distinct raw values.
[[nodiscard]] std::pair<std::vector<int>, std::vector<double>> remap_labels(std::span<const double> raw);

/// Parses `<label> <index>:<value> ...` lines (1-based ascending indices) into a dense dataset.
[[nodiscard]] dataset parse_libsvm(std::istream &in, std::string_view source = "<stream>");
[[nodiscard]] dataset load_libsvm(const std::filesystem::path &path);

/// Parses a rectangular numeric CSV. A first row holding any non-numeric cell is treated as a header.
[[nodiscard]] dataset parse_csv(std::istream &in, std::size_t label_column, std::string_view source = "<stream>");
[[nodiscard]] dataset load_csv(const std::filesystem::path &path, std::size_t label_column);

/// Writes the dataset in libsvm format using its original class values; zero entries are omitted.
void write_libsvm(std::ostream &out, const dataset &ds);

[[nodiscard]] std::pair<dataset, normalization_stats> normalize_zscore(const dataset &ds);
/// Applies previously computed statistics (e.g. the training set's) to another dataset.
[[nodiscard]] dataset apply_normalization(const dataset &ds, const normalization_stats &stats);
/// Applies statistics to a single feature vector in place.
void apply_normalization(std::span<double> x, const normalization_stats &stats);

/// Seeded uniform selection of exactly k samples per class; original order is kept.
[[nodiscard]] dataset subset_per_class(const dataset &ds, std::size_t k, std::uint64_t seed);

/// Class centers used by generate_synthetic; pairwise distances are >= separation.
[[nodiscard]] std::vector<std::vector<double>> synthetic_centers(std::size_t m, std::size_t d, double separation,
                                                                 std::uint64_t seed);

/// Isotropic unit-variance Gaussian blobs, k samples per class, stored class by class.
[[nodiscard]] dataset generate_synthetic(std::size_t m, std::size_t d, std::size_t k, double separation,
                                         std::uint64_t seed);

}  // namespace parsvm
