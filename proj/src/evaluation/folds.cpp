#include "dfbench/evaluation/folds.hpp"

#include <algorithm>
#include <string>

#include "dfbench/core/rng.hpp"
#include "dfbench/error.hpp"

namespace dfbench {

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) rows.push_back(i);
    }
    return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) rows.push_back(i);
    }
    return rows;
}

FoldPlan stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw UsageError("cross-validation needs at least 2 folds, got " + std::to_string(k));
    }
    if (labels.empty()) {
        throw DataError("cannot build folds for an empty dataset");
    }
    const int max_label = *std::max_element(labels.begin(), labels.end());
    if (*std::min_element(labels.begin(), labels.end()) < 0) {
        throw DataError("negative class label");
    }
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        members[static_cast<std::size_t>(labels[i])].push_back(i);
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.fold_of.assign(labels.size(), 0);
    const SeededRng root(seed);
    std::size_t next_fold = 0;
    for (std::size_t c = 0; c < members.size(); ++c) {
        auto& rows = members[c];
        if (rows.empty()) continue;
        if (rows.size() < k) {
            throw DataError("class " + std::to_string(c) + " has " + std::to_string(rows.size()) +
                            " samples, fewer than the " + std::to_string(k) + " folds");
        }
        SeededRng rng = root.substream(c);
        rng.shuffle(std::span<std::size_t>(rows));
        for (const std::size_t row : rows) {
            plan.fold_of[row] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return plan;
}

}  // namespace dfbench
