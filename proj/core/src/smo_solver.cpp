#include "parsvm/smo_solver.hpp"

#include "parsvm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace parsvm {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr double eta_floor = 1e-12;

bool in_up(double alpha, int y, double c) noexcept {
    return (y > 0 && alpha < c) || (y < 0 && alpha > 0.0);
}

bool in_low(double alpha, int y, double c) noexcept {
    return (y < 0 && alpha < c) || (y > 0 && alpha > 0.0);
}

struct extremes {
    std::size_t up = npos;
    double up_value = 0.0;
    std::size_t low = npos;
    double low_value = 0.0;
};

// deterministic combine: smaller (resp. larger) value wins, then the smaller index
void merge(extremes &into, const extremes &other) noexcept {
    if (other.up != npos &&
        (into.up == npos || other.up_value < into.up_value || (other.up_value == into.up_value && other.up < into.up))) {
        into.up = other.up;
        into.up_value = other.up_value;
    }
    if (other.low != npos && (into.low == npos || other.low_value > into.low_value ||
                              (other.low_value == into.low_value && other.low < into.low))) {
        into.low = other.low;
        into.low_value = other.low_value;
    }
}

extremes find_extremes(const optimality_state &state, std::span<const int> labels, double c,
                       const executor *exec) {
    const std::size_t n = state.f.size();
    const auto scan = [&](std::size_t begin, std::size_t end) {
        extremes e;
        for (std::size_t i = begin; i < end; ++i) {
            const double fi = state.f[i];
            if (in_up(state.alphas[i], labels[i], c) && (e.up == npos || fi < e.up_value)) {
                e.up = i;
                e.up_value = fi;
            }
            if (in_low(state.alphas[i], labels[i], c) && (e.low == npos || fi > e.low_value)) {
                e.low = i;
                e.low_value = fi;
            }
        }
        return e;
    };
    if (exec == nullptr || !exec->is_parallel()) {
        return scan(0, n);
    }
    std::vector<extremes> partial(exec->concurrency());
    exec->for_chunks(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) { partial[chunk] = scan(begin, end); });
    extremes out;
    for (const auto &p : partial) {
        merge(out, p);
    }
    return out;
}

double state_objective(const optimality_state &state, std::span<const int> labels) {
    // f_i + y_i = sum_j alpha_j y_j K_ij
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < state.alphas.size(); ++i) {
        linear += state.alphas[i];
        quad += state.alphas[i] * labels[i] * (state.f[i] + labels[i]);
    }
    return linear - 0.5 * quad;
}

}  // namespace

std::size_t smo_config::effective_max_iter(std::size_t n) const noexcept {
    return max_iter != 0 ? max_iter : std::max<std::size_t>(10 * n, 10000);
}

void smo_config::validate(std::size_t n) const {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw precondition_error{ "C must be positive" };
    }
    if (!(tol > 0.0)) {
        throw precondition_error{ "tolerance must be positive" };
    }
    if (check_interval == 0) {
        throw precondition_error{ "check interval must be positive" };
    }
    if (check_interval > effective_max_iter(n)) {
        throw precondition_error{ "check interval must not exceed the iteration limit" };
    }
    if (!(sv_epsilon > 0.0)) {
        throw precondition_error{ "support-vector cutoff must be positive" };
    }
    if (kernel.kind == kernel_kind::rbf && !(kernel.gamma > 0.0)) {
        throw precondition_error{ "RBF gamma must be positive" };
    }
}

executor execution::make_executor() const {
    if (!parallel) {
        return executor{};
    }
    return executor{ threads != 0 ? threads : default_thread_count() };
}

optimality_state init_state(const binary_problem &problem, const smo_config &cfg) {
    if (!problem.has_both_signs()) {
        throw precondition_error{ "binary problem needs samples of both signs" };
    }
    cfg.validate(problem.size());
    const auto labels = problem.labels();
    optimality_state state;
    state.alphas.assign(problem.size(), 0.0);
    state.f.resize(problem.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        state.f[i] = -static_cast<double>(labels[i]);
    }
    state.i_up = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), 1) - labels.begin());
    state.i_low = static_cast<std::size_t>(std::find(labels.begin(), labels.end(), -1) - labels.begin());
    state.b_up = -1.0;
    state.b_low = 1.0;
    return state;
}

std::optional<violating_pair> select_violating_pair(const optimality_state &state, std::span<const int> labels,
                                                    const smo_config &cfg, const executor *exec) {
    if (labels.size() != state.f.size()) {
        throw dimension_error{ "label vector", state.f.size(), labels.size() };
    }
    const auto e = find_extremes(state, labels, cfg.c, exec);
    if (e.up == npos || e.low == npos) {
        return std::nullopt;
    }
    return violating_pair{ e.low, e.up, e.low_value - e.up_value };
}

void update_pair(optimality_state &state, const matrix_view &samples, std::span<const int> labels,
                 const smo_config &cfg, std::size_t i_low, std::size_t i_up, const executor *exec) {
    const std::size_t n = state.alphas.size();
    if (i_low >= n || i_up >= n || i_low == i_up) {
        throw precondition_error{ "update_pair needs two distinct in-range indices" };
    }
    const double c = cfg.c;
    const int y_up = labels[i_up];
    const int y_low = labels[i_low];
    const double a_up = state.alphas[i_up];
    const double a_low = state.alphas[i_low];

    const auto x_up = samples.row(i_up);
    const auto x_low = samples.row(i_low);
    const double eta = kernel_value(cfg.kernel, x_up, x_up) + kernel_value(cfg.kernel, x_low, x_low) -
                       2.0 * kernel_value(cfg.kernel, x_up, x_low);
    const double gap = state.f[i_low] - state.f[i_up];

    // Move along alpha_up += y_up t, alpha_low -= y_low t, which keeps sum alpha_i y_i fixed.
    // W(t) = W(0) + gap t - eta t^2 / 2.
    const double room_up = y_up > 0 ? c - a_up : a_up;
    const double room_low = y_low > 0 ? a_low : c - a_low;
    const double t_max = std::max(0.0, std::min(room_up, room_low));

    double t = 0.0;
    if (eta > eta_floor) {
        t = std::clamp(gap / eta, 0.0, t_max);
    } else {
        const double gain_end = gap * t_max - 0.5 * eta * t_max * t_max;
        t = gain_end > 0.0 ? t_max : 0.0;
    }
    if (t == 0.0) {
        return;
    }

    double new_up = a_up + y_up * t;
    double new_low = a_low - y_low * t;
    if (t == room_up) {
        new_up = y_up > 0 ? c : 0.0;
    }
    if (t == room_low) {
        new_low = y_low > 0 ? 0.0 : c;
    }
    new_up = std::clamp(new_up, 0.0, c);
    new_low = std::clamp(new_low, 0.0, c);

    const double d_up = (new_up - a_up) * y_up;
    const double d_low = (new_low - a_low) * y_low;
    state.alphas[i_up] = new_up;
    state.alphas[i_low] = new_low;

    const kernel_spec kernel = cfg.kernel;
    const auto apply = [&](std::size_t i) {
        const auto xi = samples.row(i);
        state.f[i] += d_up * kernel_value(kernel, x_up, xi) + d_low * kernel_value(kernel, x_low, xi);
    };
    if (exec != nullptr) {
        exec->for_each_index(n, apply);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            apply(i);
        }
    }
}

void update_pair(optimality_state &state, const binary_problem &problem, const smo_config &cfg, std::size_t i_low,
                 std::size_t i_up, const executor *exec) {
    const auto features = problem.gather_features();
    const matrix_view samples{ features, problem.size(), problem.num_features() };
    update_pair(state, samples, problem.labels(), cfg, i_low, i_up, exec);
}

binary_model train_binary_smo(const binary_problem &problem, const smo_config &cfg, const execution &exec,
                              const smo_observer &observer) {
    auto state = init_state(problem, cfg);
    const auto labels = problem.labels();
    const auto features = problem.gather_features();
    const matrix_view samples{ features, problem.size(), problem.num_features() };
    const auto pool = exec.make_executor();
    const std::size_t max_iter = cfg.effective_max_iter(problem.size());
    const double stop_gap = 2.0 * cfg.tol;

    std::size_t iterations = 0;
    bool converged = false;
    extremes last;
    for (;;) {
        last = find_extremes(state, labels, cfg.c, &pool);
        if (last.up == npos || last.low == npos) {
            converged = true;
            break;
        }
        state.i_up = last.up;
        state.i_low = last.low;
        state.b_up = last.up_value;
        state.b_low = last.low_value;
        const double gap = last.low_value - last.up_value;

        // host-side convergence test, run once per check interval
        if (iterations % cfg.check_interval == 0 && gap <= stop_gap) {
            converged = true;
            break;
        }
        if (gap <= 0.0) {
            converged = true;
            break;
        }
        if (iterations >= max_iter) {
            converged = gap <= stop_gap;
            break;
        }
        const double before_up = state.alphas[last.up];
        const double before_low = state.alphas[last.low];
        update_pair(state, samples, labels, cfg, last.low, last.up, &pool);
        ++iterations;
        if (observer) {
            observer(iterations, state);
        }
        if (state.alphas[last.up] == before_up && state.alphas[last.low] == before_low) {
            // no representable progress on the steepest pair
            converged = gap <= stop_gap;
            break;
        }
    }

    double bias = 0.0;
    if (last.up != npos && last.low != npos) {
        bias = -(last.up_value + last.low_value) / 2.0;
    } else if (last.up != npos) {
        bias = -last.up_value;
    } else if (last.low != npos) {
        bias = -last.low_value;
    }
    training_info info;
    info.iterations = iterations;
    info.converged = converged;
    info.gap = (last.up != npos && last.low != npos) ? last.low_value - last.up_value : 0.0;
    info.dual_objective = state_objective(state, labels);
    return make_binary_model(problem, std::move(state.alphas), bias, cfg.kernel, cfg.c, cfg.sv_epsilon, info);
}

kkt_report kkt_violations(const binary_model &model, const binary_problem &problem, double tol, double sv_epsilon) {
    if (model.alphas.size() != problem.size()) {
        throw dimension_error{ "model multipliers", problem.size(), model.alphas.size() };
    }
    kkt_report report;
    const auto labels = problem.labels();
    for (std::size_t i = 0; i < problem.size(); ++i) {
        const double margin = labels[i] * decision_value(model, problem.row(i));
        const double a = model.alphas[i];
        if (a <= sv_epsilon) {
            if (margin < 1.0 - tol) {
                ++report.at_lower;
            }
        } else if (a >= model.c - sv_epsilon) {
            if (margin > 1.0 + tol) {
                ++report.at_upper;
            }
        } else if (std::abs(margin - 1.0) > tol) {
            ++report.free;
        }
    }
    return report;
}

}  // namespace parsvm
