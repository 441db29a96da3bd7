#include "seqabs/numeric/random.hpp"

namespace seqabs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = splitmix64(master);
  for (auto c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

double uniform01(Rng& rng) {
  // 53 random mantissa bits; independent of the standard library's
  // distribution implementation.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void uniform_fill(DenseArray& a, double limit, Rng& rng) {
  for (double& v : a.values()) v = (2.0 * uniform01(rng) - 1.0) * limit;
}

}  // namespace seqabs
