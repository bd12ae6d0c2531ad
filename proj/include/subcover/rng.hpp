#ifndef SUBCOVER_RNG_HPP
#define SUBCOVER_RNG_HPP

#include <cstdint>
#include <cmath>

namespace subcover {

// Counter-based splittable stream in the spirit of SplitMix64 / Philox:
// draw i of stream (seed, index) is a pure function of (seed, index, i),
// so identical (seed, index) replays bit-identical sequences and distinct
// indices give statistically independent streams.  State after n draws is
// key + n*GAMMA, i.e. the generator supports O(1) skipping by construction.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}

    RngStream(uint64_t seed, uint64_t stream_index)
        : key_(derive_key(seed, stream_index)), counter_(0) {}

    uint64_t next_u64() {
        counter_ += GAMMA;
        return finalize(key_ + counter_);
    }

    // strictly inside (0,1); safe to feed into log()
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) {
        return -std::log(uniform01()) / rate;
    }

    // Marsaglia polar method with a cached spare
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    static constexpr uint64_t GAMMA = 0x9E3779B97F4A7C15ULL;

    static uint64_t finalize(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static uint64_t derive_key(uint64_t seed, uint64_t stream_index) {
        uint64_t a = finalize(seed + GAMMA);
        uint64_t b = finalize(stream_index + 0xBB67AE8584CAA73BULL);
        return finalize(a ^ (b + GAMMA * 3));
    }

    uint64_t key_;
    uint64_t counter_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace subcover

#endif
