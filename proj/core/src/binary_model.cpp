#include "parsvm/binary_model.hpp"

#include "parsvm/errors.hpp"

namespace parsvm {

binary_model make_binary_model(const binary_problem &problem, std::vector<double> alphas, double bias,
                               const kernel_spec &kernel, double c, double sv_epsilon, training_info info) {
    if (alphas.size() != problem.size()) {
        throw dimension_error{ "multiplier vector", problem.size(), alphas.size() };
    }
    binary_model model;
    model.kernel = kernel;
    model.c = c;
    model.num_features = problem.num_features();
    model.bias = bias;
    model.info = info;
    const auto labels = problem.labels();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] > sv_epsilon) {
            const auto row = problem.row(i);
            model.support_vectors.insert(model.support_vectors.end(), row.begin(), row.end());
            model.weights.push_back(alphas[i] * labels[i]);
            model.support_indices.push_back(i);
        }
    }
    model.alphas = std::move(alphas);
    return model;
}

double decision_value(const binary_model &model, std::span<const double> x) {
    if (x.size() != model.num_features) {
        throw dimension_error{ "decision input", model.num_features, x.size() };
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < model.num_support(); ++s) {
        sum += model.weights[s] * kernel_value(model.kernel, model.support_vector(s), x);
    }
    return sum + model.bias;
}

}  // namespace parsvm
