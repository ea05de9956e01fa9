#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace leanevo {

// Deterministic RNG wrapper. mt19937_64 has a standard-specified sequence,
// and the helpers below avoid std::shuffle / distribution objects whose
// draws differ between standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Bernoulli draw; exact at p = 0 and p = 1.
  bool chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return u < p;
  }

  std::size_t pick(std::size_t n) { return n == 0 ? 0 : next() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = pick(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace leanevo
