#include "parsvm/multiclass.hpp"

#include "parsvm/errors.hpp"

#include <algorithm>
#include <chrono>
#include <string>

namespace parsvm {

std::string_view to_string(solver_id s) noexcept {
    return s == solver_id::smo ? "smo" : "gd";
}

solver_id parse_solver_id(std::string_view name) {
    if (name == "smo") {
        return solver_id::smo;
    }
    if (name == "gd") {
        return solver_id::gd;
    }
    throw precondition_error{ "unknown solver '" + std::string(name) + "'" };
}

std::vector<class_pair> enumerate_pairs(std::size_t m) {
    if (m < 2) {
        throw precondition_error{ "one-vs-one needs at least two classes, got " + std::to_string(m) };
    }
    std::vector<class_pair> pairs;
    pairs.reserve(m * (m - 1) / 2);
    for (std::size_t a = 0; a + 1 < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            pairs.push_back({ static_cast<int>(a), static_cast<int>(b) });
        }
    }
    return pairs;
}

std::size_t pair_index(class_pair pair, std::size_t m) {
    const auto a = static_cast<std::size_t>(pair.first);
    const auto b = static_cast<std::size_t>(pair.second);
    if (pair.first < 0 || a >= b || b >= m) {
        throw precondition_error{ "invalid class pair (" + std::to_string(pair.first) + ", " +
                                  std::to_string(pair.second) + ") for " + std::to_string(m) + " classes" };
    }
    // pairs before row a: sum_{r<a} (m - 1 - r)
    return a * (2 * m - a - 1) / 2 + (b - a - 1);
}

binary_problem build_binary_problem(const dataset &ds, class_pair pair) {
    std::vector<std::size_t> indices;
    bool has_first = false;
    bool has_second = false;
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        const int l = ds.label(i);
        if (l == pair.first || l == pair.second) {
            indices.push_back(i);
            has_first = has_first || l == pair.first;
            has_second = has_second || l == pair.second;
        }
    }
    if (!has_first || !has_second) {
        throw precondition_error{ "class " + std::to_string(has_first ? pair.second : pair.first) +
                                  " has no samples" };
    }
    return binary_problem{ ds, std::move(indices), pair.first, pair.second };
}

binary_model train_binary(const binary_problem &problem, const trainer_config &cfg) {
    if (cfg.solver == solver_id::smo) {
        return train_binary_smo(problem, cfg.smo, cfg.exec);
    }
    return train_binary_gd(problem, cfg.gd, cfg.exec);
}

const binary_model &multiclass_model::model(class_pair pair) const {
    return models.at(pair_index(pair, num_classes));
}

double multiclass_model::converged_fraction() const noexcept {
    if (models.empty()) {
        return 0.0;
    }
    const auto ok = std::count_if(models.begin(), models.end(), [](const binary_model &m) { return m.info.converged; });
    return static_cast<double>(ok) / static_cast<double>(models.size());
}

multiclass_model train_one_vs_one(const dataset &ds, const trainer_config &cfg, const pool_config &pool) {
    const std::size_t m = ds.num_classes();
    const auto pairs = enumerate_pairs(m);
    const auto counts = ds.class_counts();
    for (std::size_t c = 0; c < m; ++c) {
        if (counts[c] == 0) {
            throw precondition_error{ "class " + std::to_string(c) + " has no samples" };
        }
    }

    multiclass_model out;
    out.num_classes = m;
    out.num_features = ds.num_features();
    out.solver = cfg.solver;
    out.models.resize(pairs.size());
    out.job_seconds.assign(pairs.size(), 0.0);

    run_jobs(pairs.size(), pool, [&](std::size_t j) {
        const auto pair = pairs[j];
        try {
            const auto start = std::chrono::steady_clock::now();
            const auto problem = build_binary_problem(ds, pair);
            out.models[j] = train_binary(problem, cfg);
            out.job_seconds[j] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        } catch (const std::exception &e) {
            throw precondition_error{ "pair (" + std::to_string(pair.first) + ", " + std::to_string(pair.second) +
                                      "): " + e.what() };
        }
    });
    return out;
}

int vote_winner(std::span<const std::size_t> votes) {
    if (votes.empty()) {
        throw precondition_error{ "no classes to vote for" };
    }
    // max_element returns the first maximum, i.e. the lowest class id on ties
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

int predict_multiclass(const multiclass_model &model, std::span<const double> x) {
    if (x.size() != model.num_features) {
        throw dimension_error{ "prediction input", model.num_features, x.size() };
    }
    std::vector<std::size_t> votes(model.num_classes, 0);
    const auto pairs = enumerate_pairs(model.num_classes);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const double value = decision_value(model.models[j], x);
        ++votes[static_cast<std::size_t>(value >= 0.0 ? pairs[j].first : pairs[j].second)];
    }
    return vote_winner(votes);
}

double evaluate_accuracy(const multiclass_model &model, const dataset &ds) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.num_samples(); ++i) {
        if (predict_multiclass(model, ds.row(i)) == ds.label(i)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(ds.num_samples());
}

}  // namespace parsvm
