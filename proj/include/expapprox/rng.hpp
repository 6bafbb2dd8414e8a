#pragma once

#include <cstdint>

namespace expapprox {

// Counter-free splitmix64; used both as a mixer and as the stream seeder.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// xoshiro256++ state. We roll our own uniform instead of
// std::uniform_real_distribution so that output is identical across
// standard library implementations (samples feed byte-exact CSV output).
class RngState {
  public:
    explicit RngState(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& si : s_) si = x = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0,1); never returns 0 or 1 so inverse-CDF sampling is safe.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Bernoulli(p) draw.
    bool bernoulli(double p) { return uniform() < p; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

// Deterministic per-replicate stream: hash(master_seed, stream_id).
// Replicates drawn from derived streams are independent of the worker
// count and of the order in which threads pick them up.
inline RngState derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RngState(splitmix64(master_seed ^ splitmix64(stream_id + 0x51a2b3c4d5e6f708ULL)));
}

}  // namespace expapprox
