#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dfbench {

/// Counter-based pseudo-random stream.
///
/// Draw i of a stream with key k is splitmix64(k + (i + 1) * 0x9E3779B97F4A7C15),
/// i.e. the SplitMix64 finalizer applied to a Weyl sequence. Everything is
/// integer arithmetic, so the integer stream is identical on every platform.
/// Derived quantities (uniform doubles, bounded integers, shuffles) are built
/// here instead of through <random> distributions, whose output is
/// implementation-defined.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), key_(mix(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer on [0, bound). Unbiased (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// Independent stream identified by `stream_id`; does not advance this one.
    SeededRng substream(std::uint64_t stream_id) const;

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    /// `count` distinct indices from [0, population), in draw order.
    std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count);

    static std::uint64_t mix(std::uint64_t z) noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::optional<double> spare_normal_;
};

}  // namespace dfbench
