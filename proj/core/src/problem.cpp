#include "parsvm/problem.hpp"

#include "parsvm/errors.hpp"

#include <algorithm>
#include <string>

namespace parsvm {

binary_problem::binary_problem(const dataset &parent, std::vector<std::size_t> indices, int positive_class,
                               int negative_class) :
    parent_{ &parent },
    indices_{ std::move(indices) },
    positive_{ positive_class },
    negative_{ negative_class } {
    if (indices_.empty()) {
        throw precondition_error{ "binary problem needs at least one sample" };
    }
    if (positive_ == negative_) {
        throw precondition_error{ "positive and negative class must differ" };
    }
    std::vector<std::size_t> sorted = indices_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw precondition_error{ "binary problem indices contain duplicates" };
    }
    if (sorted.back() >= parent.num_samples()) {
        throw precondition_error{ "binary problem index " + std::to_string(sorted.back()) + " out of range" };
    }
    labels_.reserve(indices_.size());
    for (const auto i : indices_) {
        const int l = parent.label(i);
        if (l != positive_ && l != negative_) {
            throw precondition_error{ "sample " + std::to_string(i) + " has class " + std::to_string(l) +
                                      ", not part of pair (" + std::to_string(positive_) + ", " +
                                      std::to_string(negative_) + ")" };
        }
        labels_.push_back(l == positive_ ? 1 : -1);
    }
}

std::vector<double> binary_problem::gather_features() const {
    const std::size_t d = num_features();
    std::vector<double> out;
    out.reserve(indices_.size() * d);
    for (const auto i : indices_) {
        const auto r = parent_->row(i);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

bool binary_problem::has_both_signs() const noexcept {
    const bool pos = std::find(labels_.begin(), labels_.end(), 1) != labels_.end();
    const bool neg = std::find(labels_.begin(), labels_.end(), -1) != labels_.end();
    return pos && neg;
}

}  // namespace parsvm
