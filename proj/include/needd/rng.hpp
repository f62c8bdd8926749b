#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace needd
{

using RandomStream = std::mt19937_64;

/// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive hash of a small integer tuple.
constexpr std::uint64_t hash_tuple(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto p : parts)
        h = mix64(h ^ mix64(p));
    return h;
}

/// Stream seed for one Monte-Carlo cell: master XOR hash(run, target, noise).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run, std::uint64_t target,
                                    std::uint64_t noise)
{
    return master ^ hash_tuple({run, target, noise});
}

inline RandomStream make_stream(std::uint64_t seed)
{
    return RandomStream(seed);
}

} // namespace needd
