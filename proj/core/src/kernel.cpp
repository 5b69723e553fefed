#include "parsvm/kernel.hpp"

#include "parsvm/errors.hpp"
#include "parsvm/parallel.hpp"

#include <cmath>
#include <string>

namespace parsvm {

std::string_view to_string(kernel_kind kind) noexcept {
    switch (kind) {
        case kernel_kind::linear: return "linear";
        case kernel_kind::rbf: return "rbf";
    }
    return "unknown";
}

kernel_kind parse_kernel_kind(std::string_view name) {
    if (name == "linear") {
        return kernel_kind::linear;
    }
    if (name == "rbf") {
        return kernel_kind::rbf;
    }
    throw precondition_error{ "unknown kernel '" + std::string(name) + "'" };
}

kernel_spec kernel_spec::rbf(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw precondition_error{ "RBF gamma must be a positive finite number" };
    }
    return { kernel_kind::rbf, gamma };
}

kernel_spec kernel_spec::rbf_default(std::size_t num_features) {
    if (num_features == 0) {
        throw precondition_error{ "cannot derive a default gamma for zero features" };
    }
    return rbf(1.0 / static_cast<double>(num_features));
}

double kernel_value(const kernel_spec &spec, std::span<const double> x, std::span<const double> y) noexcept {
    const std::size_t d = x.size();
    if (spec.kind == kernel_kind::linear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            dot += x[j] * y[j];
        }
        return dot;
    }
    // direct sum of squared differences; the expanded |x|^2 + |y|^2 - 2xy form cancels badly
    double sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = x[j] - y[j];
        sq += diff * diff;
    }
    return std::exp(-spec.gamma * sq);
}

double kernel_eval(const kernel_spec &spec, std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw dimension_error{ "kernel arguments", x.size(), y.size() };
    }
    return kernel_value(spec, x, y);
}

std::vector<double> kernel_row(const kernel_spec &spec, const matrix_view &samples, std::size_t i,
                               const executor *exec) {
    if (i >= samples.rows) {
        throw precondition_error{ "kernel row index " + std::to_string(i) + " out of range for " +
                                  std::to_string(samples.rows) + " samples" };
    }
    std::vector<double> out(samples.rows);
    const auto xi = samples.row(i);
    const auto fill = [&](std::size_t j) { out[j] = kernel_value(spec, xi, samples.row(j)); };
    if (exec != nullptr) {
        exec->for_each_index(samples.rows, fill);
    } else {
        for (std::size_t j = 0; j < samples.rows; ++j) {
            fill(j);
        }
    }
    return out;
}

gram_matrix::gram_matrix(std::size_t n, std::vector<double> values) : n_{ n }, values_{ std::move(values) } {
    if (values_.size() != n_ * n_) {
        throw dimension_error{ "gram matrix storage", n_ * n_, values_.size() };
    }
}

gram_matrix compute_gram(const kernel_spec &spec, const matrix_view &samples, std::size_t cap,
                         const executor *exec) {
    const std::size_t n = samples.rows;
    if (n != 0 && n > cap / n) {
        throw gram_cap_error{ "gram matrix with " + std::to_string(n) + "^2 entries exceeds the cap of " +
                              std::to_string(cap) + "; use row-wise kernel evaluation instead" };
    }
    std::vector<double> values(n * n);
    // upper triangle per row, mirrored afterwards so both halves hold the identical value
    const auto fill_row = [&](std::size_t i) {
        const auto xi = samples.row(i);
        for (std::size_t j = i; j < n; ++j) {
            values[i * n + j] = kernel_value(spec, xi, samples.row(j));
        }
    };
    if (exec != nullptr) {
        exec->for_each_index(n, fill_row);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            fill_row(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            values[i * n + j] = values[j * n + i];
        }
    }
    return gram_matrix{ n, std::move(values) };
}

}  // namespace parsvm
