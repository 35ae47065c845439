#include "epci/rng.hpp"

#include "epci/distributions.hpp"

namespace epci {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::initializer_list<std::uint64_t> keys) noexcept {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t key : keys) h = mix64(h ^ mix64(key));
    return h;
}

double NormalStream::standard_normal() { return std_normal_quantile(uniform()); }

}  // namespace epci
