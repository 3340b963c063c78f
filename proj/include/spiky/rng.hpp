#pragma once

#include <cstdint>
#include <random>

namespace spiky {

// Derives an independent stream seed from a master seed and a stream index
// (splitmix64 applied to master + index).  Used everywhere a run needs
// per-replica or per-level seeds so that results do not depend on execution
// order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

}  // namespace spiky
