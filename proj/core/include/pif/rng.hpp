#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pif {

// splitmix64 scrambler; used to derive independent streams from one seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seedable portable generator. The raw stream is std::mt19937_64, whose
// output sequence is fixed by the standard; every transform below is written
// out here rather than delegated to std::*_distribution, whose algorithms
// are implementation-defined. Given one seed, the value sequence is
// reproducible everywhere (the normal path additionally leans on libm sqrt
// and log).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer in [0, n). Multiply-shift mapping; the O(2^-59) bias is
  // irrelevant at the n <= a-few-dozen sizes used here.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  // Marsaglia polar method (no trig, one cached spare).
  double normal(double mean, double sd) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sd * spare_;
    }
    double u, v, s;
    do {
      u = uniform(-1.0, 1.0);
      v = uniform(-1.0, 1.0);
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    have_spare_ = true;
    return mean + sd * u * factor;
  }

  // Normal conditioned on being >= 0, by rejection; falls back to 0 if the
  // acceptance region is essentially unreachable.
  double truncated_normal_nonneg(double mean, double sd) {
    if (sd == 0) return mean < 0 ? 0.0 : mean;
    for (int i = 0; i < 1000; ++i) {
      const double z = normal(mean, sd);
      if (z >= 0) return z;
    }
    return 0.0;
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace pif
