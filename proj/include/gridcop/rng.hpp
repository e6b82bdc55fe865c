#pragma once

#include <cstdint>
#include <random>

#include "gridcop/errors.hpp"
#include "gridcop/normal.hpp"

namespace gridcop {

// Random source for one chain. Wraps mt19937_64 with our own variate
// transforms so that streams are reproducible across platforms and standard
// library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0,1); never returns an exact endpoint.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n), n >= 1.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_int: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return x % n;
  }

  double normal() { return norm_quantile(uniform()); }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // N(0, sd^2) conditioned on (lo, hi), by inverse-CDF.
  double truncated_normal(double sd, double lo, double hi) {
    const double pa = norm_cdf(lo / sd);
    const double pb = norm_cdf(hi / sd);
    const double p = pa + (pb - pa) * uniform();
    if (p <= 0.0 || p >= 1.0) return 0.5 * (lo + hi);
    const double x = sd * norm_quantile(p);
    return x < lo ? lo : (x > hi ? hi : x);
  }

 private:
  std::mt19937_64 engine_;
};

// Deterministic per-replicate seed derivation: splitmix64 applied to the
// master seed xored with the stream index.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace gridcop
