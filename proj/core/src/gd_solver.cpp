#include "parsvm/gd_solver.hpp"

#include "parsvm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace parsvm {

namespace {

void check_shapes(std::span<const double> alphas, std::span<const int> labels, const gram_matrix &gram) {
    if (labels.size() != alphas.size()) {
        throw dimension_error{ "label vector", alphas.size(), labels.size() };
    }
    if (gram.size() != alphas.size()) {
        throw dimension_error{ "gram matrix", alphas.size(), gram.size() };
    }
}

// g_i = sum_j alpha_j y_j K_ij
std::vector<double> expansion(std::span<const double> alphas, std::span<const int> labels, const gram_matrix &gram,
                              const executor *exec) {
    const std::size_t n = alphas.size();
    std::vector<double> weighted(n);
    for (std::size_t j = 0; j < n; ++j) {
        weighted[j] = alphas[j] * labels[j];
    }
    std::vector<double> out(n);
    const auto row_product = [&](std::size_t i) {
        const auto k = gram.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += weighted[j] * k[j];
        }
        out[i] = sum;
    };
    if (exec != nullptr) {
        exec->for_each_index(n, row_product);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            row_product(i);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(gd_projection p) noexcept {
    return p == gd_projection::feasible ? "feasible" : "box";
}

gd_projection parse_gd_projection(std::string_view name) {
    if (name == "feasible") {
        return gd_projection::feasible;
    }
    if (name == "box") {
        return gd_projection::box;
    }
    throw precondition_error{ "unknown projection '" + std::string(name) + "'" };
}

void gd_config::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw precondition_error{ "learning rate must be positive" };
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw precondition_error{ "C must be positive" };
    }
    if (!(sv_epsilon > 0.0)) {
        throw precondition_error{ "support-vector cutoff must be positive" };
    }
    if (kernel.kind == kernel_kind::rbf && !(kernel.gamma > 0.0)) {
        throw precondition_error{ "RBF gamma must be positive" };
    }
}

double dual_objective(std::span<const double> alphas, std::span<const int> labels, const gram_matrix &gram) {
    check_shapes(alphas, labels, gram);
    const auto g = expansion(alphas, labels, gram, nullptr);
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        linear += alphas[i];
        quad += alphas[i] * labels[i] * g[i];
    }
    return linear - 0.5 * quad;
}

std::vector<double> dual_gradient(std::span<const double> alphas, std::span<const int> labels,
                                  const gram_matrix &gram, const executor *exec) {
    check_shapes(alphas, labels, gram);
    auto grad = expansion(alphas, labels, gram, exec);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] = 1.0 - labels[i] * grad[i];
    }
    return grad;
}

std::vector<double> project_box(std::vector<double> alphas, double c) {
    for (auto &a : alphas) {
        a = std::clamp(a, 0.0, c);
    }
    return alphas;
}

std::vector<double> project_feasible(std::vector<double> alphas, std::span<const int> labels, double c) {
    if (labels.size() != alphas.size()) {
        throw dimension_error{ "label vector", alphas.size(), labels.size() };
    }
    const auto residual = [&](double lambda) {
        double sum = 0.0;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            sum += labels[i] * std::clamp(alphas[i] - lambda * labels[i], 0.0, c);
        }
        return sum;
    };
    double spread = c;
    for (const double a : alphas) {
        spread = std::max(spread, std::abs(a) + c);
    }
    // residual(lo) >= 0 >= residual(hi), and the residual is non-increasing in lambda
    double lo = -spread;
    double hi = spread;
    for (int step = 0; step < 200 && lo < hi; ++step) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid == lo || mid == hi) {
            break;
        }
        const double r = residual(mid);
        if (r > 0.0) {
            lo = mid;
        } else if (r < 0.0) {
            hi = mid;
        } else {
            lo = hi = mid;
        }
    }
    const double lambda = std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        alphas[i] = std::clamp(alphas[i] - lambda * labels[i], 0.0, c);
    }
    return alphas;
}

binary_model train_binary_gd(const binary_problem &problem, const gd_config &cfg, const execution &exec,
                             const gd_observer &observer) {
    if (!problem.has_both_signs()) {
        throw precondition_error{ "binary problem needs samples of both signs" };
    }
    cfg.validate();
    const std::size_t n = problem.size();
    const auto labels = problem.labels();
    const auto features = problem.gather_features();
    const matrix_view samples{ features, n, problem.num_features() };
    const auto pool = exec.make_executor();
    const auto gram = compute_gram(cfg.kernel, samples, cfg.gram_cap, &pool);

    std::vector<double> alphas(n, 0.0);
    double last_step = std::numeric_limits<double>::infinity();
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto grad = dual_gradient(alphas, labels, gram, &pool);
        std::vector<double> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = alphas[i] + cfg.learning_rate * grad[i];
        }
        next = cfg.projection == gd_projection::feasible ? project_feasible(std::move(next), labels, cfg.c)
                                                         : project_box(std::move(next), cfg.c);
        last_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            last_step = std::max(last_step, std::abs(next[i] - alphas[i]));
        }
        alphas = std::move(next);
        if (observer) {
            observer(epoch, alphas);
        }
    }

    // bias: mean over margin support vectors, else midpoint of the per-sample estimates
    const auto g = expansion(alphas, labels, gram, &pool);
    double margin_sum = 0.0;
    std::size_t margin_count = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any_sv = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double estimate = labels[i] - g[i];
        if (alphas[i] > cfg.sv_epsilon) {
            any_sv = true;
            if (alphas[i] < cfg.c - cfg.sv_epsilon) {
                margin_sum += estimate;
                ++margin_count;
            }
        }
    }
    double bias = 0.0;
    if (margin_count > 0) {
        bias = margin_sum / static_cast<double>(margin_count);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (!any_sv || alphas[i] > cfg.sv_epsilon) {
                const double estimate = labels[i] - g[i];
                lo = std::min(lo, estimate);
                hi = std::max(hi, estimate);
            }
        }
        bias = (lo + hi) / 2.0;
    }

    // informational optimality gap using the same index sets as SMO
    double b_up = std::numeric_limits<double>::infinity();
    double b_low = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = g[i] - labels[i];
        const int y = labels[i];
        if ((y > 0 && alphas[i] < cfg.c) || (y < 0 && alphas[i] > 0.0)) {
            b_up = std::min(b_up, fi);
        }
        if ((y < 0 && alphas[i] < cfg.c) || (y > 0 && alphas[i] > 0.0)) {
            b_low = std::max(b_low, fi);
        }
    }

    training_info info;
    info.iterations = cfg.epochs;
    info.converged = cfg.epochs > 0 && last_step <= 1e-6;
    info.gap = std::isfinite(b_low - b_up) ? b_low - b_up : 0.0;
    info.dual_objective = dual_objective(alphas, labels, gram);
    return make_binary_model(problem, std::move(alphas), bias, cfg.kernel, cfg.c, cfg.sv_epsilon, info);
}

}  // namespace parsvm
