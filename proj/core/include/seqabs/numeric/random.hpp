#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "seqabs/numeric/dense_array.hpp"

namespace seqabs {

using Rng = std::mt19937_64;

/// Deterministically derives an independent stream seed from a master seed
/// and a tuple of stream coordinates (e.g. {stream tag, episode, play}).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) noexcept;

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  return Rng(derive_seed(master, coords));
}

/// Fills `a` with i.i.d. uniform values in [-limit, limit].
void uniform_fill(DenseArray& a, double limit, Rng& rng);

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

}  // namespace seqabs
