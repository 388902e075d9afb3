#pragma once

#include <cstdint>
#include <random>

#include "ahlfors/fields.hpp"

namespace ahlfors {

// Deterministic normal deviates: a fixed Box-Muller transform over
// mt19937_64 so streams are identical across platforms and library versions
// (std::normal_distribution is implementation-defined).
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // 53-bit uniforms centered away from 0 and 1
    const double u1 = (double(rng_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (double(rng_() >> 11) + 0.5) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// White noise projected onto modes |k_a| <= band per axis (band is clamped to
// N_a/4 so the fields stay well inside the resolvable range), then normalized
// to unit RMS per component. Same seed, same field, bit for bit.
ScalarField random_scalar(const GridShape& s, int band, NormalSampler& rng);
OneFormField random_one_form(const GridShape& s, int band, NormalSampler& rng);
SymTensorField random_sym2(const GridShape& s, int band, NormalSampler& rng);

inline int default_band(const GridShape& s) {
  Index nmin = s.dims[0];
  for (int a = 1; a < s.n; ++a) nmin = std::min(nmin, s.dims[size_t(a)]);
  return int(std::min<Index>(nmin / 4, 8));
}

}  // namespace ahlfors
