#include "parsvm/dataset.hpp"

#include "parsvm/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace parsvm {

dimension_error::dimension_error(const std::string &what, std::size_t expected, std::size_t actual) :
    error{ what + ": expected dimension " + std::to_string(expected) + ", got " + std::to_string(actual) },
    expected_{ expected },
    actual_{ actual } {}

dataset::dataset(std::vector<double> features, std::size_t num_features, std::vector<int> labels,
                 std::vector<double> class_values, bool normalized) :
    features_{ std::move(features) },
    num_features_{ num_features },
    labels_{ std::move(labels) },
    class_values_{ std::move(class_values) },
    normalized_{ normalized } {
    if (labels_.empty()) {
        throw precondition_error{ "dataset must contain at least one sample" };
    }
    if (num_features_ == 0) {
        throw precondition_error{ "dataset must have at least one feature" };
    }
    if (features_.size() != labels_.size() * num_features_) {
        throw dimension_error{ "feature matrix size", labels_.size() * num_features_, features_.size() };
    }
    if (class_values_.empty()) {
        throw precondition_error{ "dataset must have at least one class" };
    }
    const auto m = static_cast<int>(class_values_.size());
    for (const int l : labels_) {
        if (l < 0 || l >= m) {
            throw precondition_error{ "label " + std::to_string(l) + " outside [0, " + std::to_string(m) + ")" };
        }
    }
    for (const double v : features_) {
        if (!std::isfinite(v)) {
            throw precondition_error{ "dataset contains a non-finite feature value" };
        }
    }
}

std::vector<std::size_t> dataset::class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (const int l : labels_) {
        ++counts[static_cast<std::size_t>(l)];
    }
    return counts;
}

std::pair<std::vector<int>, std::vector<double>> remap_labels(std::span<const double> raw) {
    std::vector<double> values(raw.begin(), raw.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::vector<int> ids;
    ids.reserve(raw.size());
    for (const double r : raw) {
        ids.push_back(static_cast<int>(std::lower_bound(values.begin(), values.end(), r) - values.begin()));
    }
    return { std::move(ids), std::move(values) };
}

namespace {

[[noreturn]] void fail_at(std::string_view source, std::size_t line, const std::string &msg) {
    std::ostringstream os;
    os << source << ":" << line << ": " << msg;
    throw parse_error{ os.str() };
}

std::ifstream open_or_throw(const std::filesystem::path &path) {
    std::ifstream in{ path };
    if (!in) {
        throw error{ "cannot open " + path.string() };
    }
    return in;
}

dataset assemble(std::vector<double> features, std::size_t d, const std::vector<double> &raw_labels) {
    auto [ids, values] = remap_labels(raw_labels);
    return dataset{ std::move(features), d, std::move(ids), std::move(values) };
}

}  // namespace

dataset parse_libsvm(std::istream &in, std::string_view source) {
    struct entry {
        std::size_t index;
        double value;
    };
    std::vector<std::vector<entry>> rows;
    std::vector<double> raw_labels;
    std::size_t d = 0;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = detail::trim(text);
        if (text.empty()) {
            continue;
        }

        std::vector<entry> row;
        std::size_t pos = 0;
        bool first = true;
        std::size_t last_index = 0;
        while (pos < text.size()) {
            const auto end = std::min(text.find_first_of(" \t", pos), text.size());
            const auto token = text.substr(pos, end - pos);
            pos = text.find_first_not_of(" \t", end);
            if (pos == std::string_view::npos) {
                pos = text.size();
            }
            if (first) {
                const auto label = detail::parse_double(token);
                if (!label || !std::isfinite(*label)) {
                    fail_at(source, line_no, "non-numeric label '" + std::string(token) + "'");
                }
                raw_labels.push_back(*label);
                first = false;
                continue;
            }
            const auto colon = token.find(':');
            if (colon == std::string_view::npos) {
                fail_at(source, line_no, "expected <index>:<value>, got '" + std::string(token) + "'");
            }
            const auto idx_text = token.substr(0, colon);
            std::size_t index = 0;
            const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
            if (ec != std::errc{} || ptr != idx_text.data() + idx_text.size() || index == 0) {
                fail_at(source, line_no, "invalid feature index '" + std::string(idx_text) + "'");
            }
            if (index <= last_index) {
                fail_at(source, line_no, "feature indices must be strictly ascending");
            }
            last_index = index;
            const auto value = detail::parse_double(token.substr(colon + 1));
            if (!value || !std::isfinite(*value)) {
                fail_at(source, line_no, "non-numeric value in '" + std::string(token) + "'");
            }
            row.push_back({ index, *value });
            d = std::max(d, index);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw parse_error{ std::string(source) + ": empty file" };
    }
    if (d == 0) {
        throw parse_error{ std::string(source) + ": no feature values present" };
    }

    std::vector<double> features(rows.size() * d, 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto &e : rows[i]) {
            features[i * d + (e.index - 1)] = e.value;
        }
    }
    return assemble(std::move(features), d, raw_labels);
}

dataset load_libsvm(const std::filesystem::path &path) {
    auto in = open_or_throw(path);
    return parse_libsvm(in, path.string());
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    for (;;) {
        const auto comma = line.find(',', pos);
        cells.push_back(detail::trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos)));
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return cells;
}

}  // namespace

dataset parse_csv(std::istream &in, std::size_t label_column, std::string_view source) {
    std::vector<double> features;
    std::vector<double> raw_labels;
    std::size_t columns = 0;

    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty()) {
            continue;
        }
        const auto cells = split_csv(text);
        if (first_row) {
            first_row = false;
            columns = cells.size();
            if (label_column >= columns) {
                fail_at(source, line_no,
                        "label column " + std::to_string(label_column) + " out of range for " +
                            std::to_string(columns) + " columns");
            }
            if (columns < 2) {
                fail_at(source, line_no, "need at least one feature column besides the label");
            }
            const bool header = std::any_of(cells.begin(), cells.end(),
                                            [](std::string_view c) { return !detail::parse_double(c).has_value(); });
            if (header) {
                continue;
            }
        }
        if (cells.size() != columns) {
            fail_at(source, line_no,
                    "ragged row: expected " + std::to_string(columns) + " columns, got " +
                        std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto value = detail::parse_double(cells[c]);
            if (!value || !std::isfinite(*value)) {
                fail_at(source, line_no,
                        "non-numeric cell '" + std::string(cells[c]) + "' in column " + std::to_string(c));
            }
            if (c == label_column) {
                raw_labels.push_back(*value);
            } else {
                features.push_back(*value);
            }
        }
    }
    if (raw_labels.empty()) {
        throw parse_error{ std::string(source) + ": empty file" };
    }
    return assemble(std::move(features), columns - 1, raw_labels);
}

dataset load_csv(const std::filesystem::path &path, std::size_t label_column) {
    auto in = open_or_throw(path);
    return parse_csv(in, label_column, path.string());
}

void write_libsvm(std::ostream &out, const dataset &ds) {
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        out << detail::format_double(ds.class_values()[static_cast<std::size_t>(ds.label(i))]);
        const auto row = ds.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] != 0.0) {
                out << ' ' << (j + 1) << ':' << detail::format_double(row[j]);
            }
        }
        out << '\n';
    }
}

std::pair<dataset, normalization_stats> normalize_zscore(const dataset &ds) {
    if (ds.is_normalized()) {
        throw precondition_error{ "dataset is already normalized" };
    }
    const std::size_t n = ds.num_samples();
    const std::size_t d = ds.num_features();
    normalization_stats stats{ std::vector<double>(d, 0.0), std::vector<double>(d, 0.0) };
    std::vector<bool> degenerate(d, false);
    for (std::size_t j = 0; j < d; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += ds.row(i)[j];
        }
        const double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = ds.row(i)[j] - mean;
            sq += diff * diff;
        }
        const double stddev = std::sqrt(sq / static_cast<double>(n));
        stats.mean[j] = mean;
        stats.stddev[j] = stddev < 1e-12 ? 1.0 : stddev;
        degenerate[j] = stddev < 1e-12;
    }
    std::vector<double> features = ds.features();
    for (std::size_t i = 0; i < n; ++i) {
        const std::span<double> row{ features.data() + i * d, d };
        apply_normalization(row, stats);
        for (std::size_t j = 0; j < d; ++j) {
            if (degenerate[j]) {
                row[j] = 0.0;
            }
        }
    }
    dataset out{ std::move(features), d, ds.labels(), ds.class_values(), true };
    return { std::move(out), std::move(stats) };
}

void apply_normalization(std::span<double> x, const normalization_stats &stats) {
    if (x.size() != stats.mean.size() || x.size() != stats.stddev.size()) {
        throw dimension_error{ "normalization stats", stats.mean.size(), x.size() };
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = (x[j] - stats.mean[j]) / stats.stddev[j];
    }
}

dataset apply_normalization(const dataset &ds, const normalization_stats &stats) {
    if (ds.is_normalized()) {
        throw precondition_error{ "dataset is already normalized" };
    }
    const std::size_t d = ds.num_features();
    std::vector<double> features = ds.features();
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        apply_normalization(std::span<double>{ features.data() + i * d, d }, stats);
    }
    return dataset{ std::move(features), d, ds.labels(), ds.class_values(), true };
}

dataset subset_per_class(const dataset &ds, std::size_t k, std::uint64_t seed) {
    if (k == 0) {
        throw precondition_error{ "samples per class must be positive" };
    }
    const std::size_t m = ds.num_classes();
    std::vector<std::vector<std::size_t>> members(m);
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        members[static_cast<std::size_t>(ds.label(i))].push_back(i);
    }
    for (std::size_t c = 0; c < m; ++c) {
        if (members[c].size() < k) {
            throw precondition_error{ "class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                                      " samples, fewer than the requested " + std::to_string(k) };
        }
    }

    std::mt19937_64 rng{ seed };
    std::vector<std::size_t> chosen;
    chosen.reserve(k * m);
    for (auto &pool : members) {
        // partial Fisher-Yates: the first k slots become a uniform sample
        for (std::size_t s = 0; s < k; ++s) {
            std::uniform_int_distribution<std::size_t> pick{ s, pool.size() - 1 };
            std::swap(pool[s], pool[pick(rng)]);
        }
        chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    }
    std::sort(chosen.begin(), chosen.end());

    const std::size_t d = ds.num_features();
    std::vector<double> features;
    features.reserve(chosen.size() * d);
    std::vector<int> labels;
    labels.reserve(chosen.size());
    for (const auto i : chosen) {
        const auto row = ds.row(i);
        features.insert(features.end(), row.begin(), row.end());
        labels.push_back(ds.label(i));
    }
    return dataset{ std::move(features), d, std::move(labels), ds.class_values(), ds.is_normalized() };
}

std::vector<std::vector<double>> synthetic_centers(std::size_t m, std::size_t d, double separation,
                                                   std::uint64_t seed) {
    if (m < 2 || d < 1 || !(separation > 0.0)) {
        throw precondition_error{ "synthetic data needs m >= 2, d >= 1 and separation > 0" };
    }
    std::mt19937_64 rng{ seed };
    std::normal_distribution<double> normal{ 0.0, 1.0 };
    std::vector<std::vector<double>> centers;
    double radius = separation;
    std::size_t rejections = 0;
    while (centers.size() < m) {
        std::vector<double> c(d);
        double norm = 0.0;
        do {
            for (auto &v : c) {
                v = normal(rng);
            }
            norm = std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
        } while (norm == 0.0);
        for (auto &v : c) {
            v *= radius / norm;
        }
        const bool ok = std::all_of(centers.begin(), centers.end(), [&](const std::vector<double> &other) {
            double sq = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                sq += (c[j] - other[j]) * (c[j] - other[j]);
            }
            return std::sqrt(sq) >= separation;
        });
        if (ok) {
            centers.push_back(std::move(c));
            rejections = 0;
        } else if (++rejections % 64 == 0) {
            // the sphere is too crowded for the requested separation
            radius *= 1.25;
        }
    }
    return centers;
}

dataset generate_synthetic(std::size_t m, std::size_t d, std::size_t k, double separation, std::uint64_t seed) {
    if (k < 1) {
        throw precondition_error{ "synthetic data needs k >= 1" };
    }
    const auto centers = synthetic_centers(m, d, separation, seed);
    std::mt19937_64 rng{ seed ^ 0x9e3779b97f4a7c15ULL };
    std::normal_distribution<double> normal{ 0.0, 1.0 };

    std::vector<double> features;
    features.reserve(m * k * d);
    std::vector<int> labels;
    labels.reserve(m * k);
    for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t s = 0; s < k; ++s) {
            for (std::size_t j = 0; j < d; ++j) {
                features.push_back(centers[c][j] + normal(rng));
            }
            labels.push_back(static_cast<int>(c));
        }
    }
    std::vector<double> class_values(m);
    std::iota(class_values.begin(), class_values.end(), 0.0);
    return dataset{ std::move(features), d, std::move(labels), std::move(class_values) };
}

}  // namespace parsvm
