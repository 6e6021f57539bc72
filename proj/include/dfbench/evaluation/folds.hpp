#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dfbench {

/// Assignment of every sample to exactly one of k folds.
struct FoldPlan {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of;  // per sample

    std::vector<std::size_t> test_rows(std::size_t fold) const;
    std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Stratified assignment. Each class's samples are shuffled with the class's
/// own substream of `seed` and dealt round-robin; the deal continues across
/// classes so fold totals stay balanced too. Per class, fold counts differ
/// by at most one. Requires k >= 2 and every class to have at least k
/// samples.
FoldPlan stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

}  // namespace dfbench
