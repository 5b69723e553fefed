#pragma once

#include "oracles.hpp"

#include "parsvm/dataset.hpp"
#include "parsvm/problem.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace fixtures {

inline std::string data_path(const std::string &name) {
    return std::string(PARSVM_TEST_DATA_DIR) + "/" + name;
}

/// Dataset whose label 0 is y = +1 and label 1 is y = -1, so the (0, 1) problem has the given signs.
inline parsvm::dataset signed_dataset(const std::vector<oracle::point> &x, const std::vector<int> &y) {
    std::vector<double> features;
    for (const auto &p : x) {
        features.insert(features.end(), p.begin(), p.end());
    }
    std::vector<int> labels;
    for (const int s : y) {
        labels.push_back(s > 0 ? 0 : 1);
    }
    return parsvm::dataset{ std::move(features), x.front().size(), std::move(labels), { 0.0, 1.0 } };
}

inline parsvm::binary_problem whole_problem(const parsvm::dataset &ds) {
    std::vector<std::size_t> idx(ds.num_samples());
    std::iota(idx.begin(), idx.end(), std::size_t{ 0 });
    return parsvm::binary_problem{ ds, std::move(idx), 0, 1 };
}

/// x = (1, 3), y = (+1, -1): the closed-form optimum is alpha = (0.5, 0.5), b = 2.
inline parsvm::dataset two_point() {
    return signed_dataset({ { 1.0 }, { 3.0 } }, { 1, -1 });
}

}  // namespace fixtures
