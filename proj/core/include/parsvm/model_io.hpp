#pragma once

#include "parsvm/dataset.hpp"
#include "parsvm/kernel.hpp"
#include "parsvm/multiclass.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace parsvm {

inline constexpr int model_format_version = 1;

/// Everything needed to reproduce predictions: the trained pairs plus the input transform.
struct model_file {
    int version = model_format_version;
    kernel_spec kernel;
    std::optional<normalization_stats> normalization;
    /// Original label value of each class id.
    std::vector<double> class_values;
    multiclass_model model;
};

/// Canonical JSON text: sorted keys, shortest round-trip numbers, no timing data.
[[nodiscard]] std::string to_json_string(const model_file &file);
/// Throws parse_error (with byte offset for malformed JSON) or unsupported_version_error.
[[nodiscard]] model_file from_json_string(std::string_view text);

void save_model(const std::filesystem::path &path, const model_file &file);
[[nodiscard]] model_file load_model(const std::filesystem::path &path);

}  // namespace parsvm
