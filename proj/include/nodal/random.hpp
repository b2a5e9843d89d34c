/**
 * @file random.hpp
 * @brief Philox4x32-10 counter-based generator with independent substreams.
 */
#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace nodal {

/**
 * Satisfies UniformRandomBitGenerator. The 64-bit key selects the stream
 * (seed), the upper half of the 128-bit counter selects the substream.
 */
class Philox4x32 {
public:
    using result_type = std::uint32_t;

    explicit Philox4x32(std::uint64_t seed = 0, std::uint64_t substream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          counter_{0, 0, static_cast<std::uint32_t>(substream), static_cast<std::uint32_t>(substream >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (index_ == 4) {
            block_ = generate(counter_, key_);
            increment();
            index_ = 0;
        }
        return block_[index_++];
    }

    /// One block for an explicit counter and key (exposed for known-answer tests).
    static std::array<std::uint32_t, 4> generate(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kM0 = 0xD2511F53u;
        constexpr std::uint32_t kM1 = 0xCD9E8D57u;
        constexpr std::uint32_t kW0 = 0x9E3779B9u;
        constexpr std::uint32_t kW1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

private:
    void increment() {
        if (++counter_[0] == 0) ++counter_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int index_ = 4;
};

}  // namespace nodal
