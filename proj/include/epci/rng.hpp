#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace epci {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Derives an independent stream seed from a tuple of keys, e.g.
// (master_seed, scenario, n, replicate).
std::uint64_t stream_seed(std::initializer_list<std::uint64_t> keys) noexcept;

// mt19937_64 stream producing uniforms on the open interval (0, 1) from the
// top 53 bits, and standard normals by inverse-CDF transform. Output is
// identical on every platform for a given seed.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }
    double standard_normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace epci
