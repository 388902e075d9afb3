#include "ahlfors/random_fields.hpp"

#include "ahlfors/grid.hpp"

namespace ahlfors {

namespace {

ArrayXd band_limited_noise(const GridShape& s, int band, NormalSampler& rng) {
  ArrayXd f(s.total);
  for (Index i = 0; i < s.total; ++i) f[i] = rng();
  for (int a = 0; a < s.n; ++a) {
    const int b = int(std::min<Index>(band, s.dims[size_t(a)] / 4));
    f = apply_along_axis(band_limit_matrix(s.dims[size_t(a)], b), f, s, a);
  }
  const double rms = std::sqrt(f.square().mean());
  if (!(rms > 1e-12)) throw Error("degenerate random field draw");
  return f / rms;
}

}  // namespace

ScalarField random_scalar(const GridShape& s, int band, NormalSampler& rng) {
  ScalarField f = ScalarField::zeros(s);
  f.data() = band_limited_noise(s, band, rng);
  return f;
}

OneFormField random_one_form(const GridShape& s, int band, NormalSampler& rng) {
  OneFormField f = OneFormField::zeros(s);
  for (int i = 0; i < s.n; ++i) f[i] = band_limited_noise(s, band, rng);
  return f;
}

SymTensorField random_sym2(const GridShape& s, int band, NormalSampler& rng) {
  SymTensorField f = SymTensorField::zeros(s);
  for (auto& c : f.comp) c = band_limited_noise(s, band, rng);
  return f;
}

}  // namespace ahlfors
