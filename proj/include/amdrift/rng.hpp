#pragma once

#include <array>
#include <cstdint>

namespace amdrift {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Output is a pure function of (seed, stream, block index), so draws are
/// reproducible regardless of execution order. One stream per simulated
/// path gives independent substreams derived from (seed, path index).
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    Block operator()(std::uint64_t block_index) const {
        Block ctr = {static_cast<std::uint32_t>(block_index),
                     static_cast<std::uint32_t>(block_index >> 32),
                     stream_lo_, stream_hi_};
        std::uint32_t k0 = key0_;
        std::uint32_t k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k0 += 0x9E3779B9u;  // golden ratio
                k1 += 0xBB67AE85u;  // sqrt(3)-1
            }
            ctr = single_round(ctr, k0, k1);
        }
        return ctr;
    }

private:
    static Block single_round(const Block& ctr, std::uint32_t k0, std::uint32_t k1) {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
};

/// Stream of standard normal deviates for one (seed, path) substream.
///
/// Each Philox block yields two uniforms which are mapped through Box-Muller.
/// The k-th draw of a stream depends only on (seed, path, k).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path_index)
        : gen_(seed, path_index) {}

    double next();

private:
    Philox4x32 gen_;
    std::uint64_t block_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace amdrift
