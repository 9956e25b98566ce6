#pragma once

#include <cstdint>

namespace vq {

// Counter-based generator: draw i of stream (seed, stream_id) is a pure
// function of (seed, stream_id, i). Partitioning work across workers by
// stream id therefore reproduces the serial draws exactly.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^
                   mix(stream + 0x2545f4914f6cdd1dull))) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++ctr_); }

    // uniform on the open interval (0,1); safe to feed into quantile maps
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal();  // inverse-cdf method, one uniform per draw

    std::uint64_t counter() const { return ctr_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace vq
