#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace cuepoly
{

/*!
 * Seeded random stream with independent substreams.
 *
 * The 256-bit xoshiro256** state of each stream is produced by Philox4x32-10
 * keyed with the seed, with the stream id in the counter. Identical
 * (seed, stream_id) pairs reproduce identical sequences; distinct stream ids
 * start at unrelated points of a 2^256 - 1 period, so substreams need no
 * jumping or coordination.
 *
 * Satisfies UniformRandomBitGenerator with 64-bit output.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        std::uint64_t const result = rotl(state_[1] * 5, 7) * 9;
        std::uint64_t const t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        ++words_;
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    /// Uniform on (0, 1); never returns 0 or 1.
    double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
    /// Standard normal (Marsaglia polar method, no cached second variate).
    double normal();

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    /// Number of 64-bit words drawn so far.
    std::uint64_t words_drawn() const { return words_; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_{};
    std::uint64_t words_ = 0;
};

/// Single Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

}  // namespace cuepoly
