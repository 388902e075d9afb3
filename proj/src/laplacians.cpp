#include "ahlfors/laplacians.hpp"

#include <sstream>

#include "ahlfors/random_fields.hpp"

namespace ahlfors {

OneFormField hodge_laplacian(const GridManifold& m, const OneFormField& theta) {
  return ext_d(m, codiff(m, theta)) + codiff(m, ext_d(m, theta));
}

OneFormField sampson_laplacian(const GridManifold& m, const OneFormField& theta) {
  return 2.0 * div_sym2(m, killing_op(m, theta)) - ext_d(m, codiff(m, theta));
}

OneFormField ricci_form(const GridManifold& m, const OneFormField& theta) {
  if (!(theta.shape == m.shape())) throw ShapeMismatch("field does not live on this grid");
  const int n = m.dim();
  const VectorField xi = sharp(m, theta);
  OneFormField out = OneFormField::zeros(theta.shape);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out[j] += m.ricci().at(k, j) * xi[k];
  return out;
}

OneFormField ahlfors_direct(const GridManifold& m, const OneFormField& theta) {
  return ahlfors_adjoint(m, cauchy_ahlfors(m, theta), /*require_tracefree=*/true);
}

OneFormField ahlfors_via_hodge(const GridManifold& m, const OneFormField& theta) {
  const double n = m.dim();
  OneFormField out = 0.5 * codiff(m, ext_d(m, theta)) +
                     ((n - 1.0) / n) * ext_d(m, codiff(m, theta));
  out -= ricci_form(m, theta);
  return out;
}

OneFormField ahlfors_via_weitzenboeck(const GridManifold& m, const OneFormField& theta) {
  const double n = m.dim();
  OneFormField out = 0.5 * hodge_laplacian(m, theta) +
                     ((n - 2.0) / (2.0 * n)) * ext_d(m, codiff(m, theta));
  out -= ricci_form(m, theta);
  return out;
}

OneFormField ahlfors_via_sampson(const GridManifold& m, const OneFormField& theta) {
  const double n = m.dim();
  return 0.5 * sampson_laplacian(m, theta) +
         ((n - 2.0) / (2.0 * n)) * ext_d(m, codiff(m, theta));
}

namespace {

std::string describe_metric(const GridManifold& m) {
  std::ostringstream os;
  switch (m.metric_kind()) {
    case MetricKind::Flat: os << "flat"; break;
    case MetricKind::Conformal: os << "conformal"; break;
    case MetricKind::Explicit: os << "explicit"; break;
  }
  os << " T^" << m.dim() << " [";
  for (int a = 0; a < m.dim(); ++a) os << (a ? "x" : "") << m.shape().dims[size_t(a)];
  os << "]";
  return os.str();
}

// Update a field-identity check with the relative L2 error and the node of the
// largest pointwise residual.
void update_field_check(IdentityCheck& chk, const GridManifold& m, const OneFormField& lhs,
                        const OneFormField& rhs) {
  OneFormField diff = lhs - rhs;
  const double denom = norm_l2(m, lhs) + norm_l2(m, rhs) + 1e-300;
  const double err = norm_l2(m, diff) / denom;

  if (err >= chk.error) {
    chk.error = err;
    ArrayXd point = ArrayXd::Zero(m.shape().total);
    for (const auto& c : diff.comp) point += c.abs();
    Index node = 0;
    point.maxCoeff(&node);
    chk.worst_node = node;
    chk.worst_coords = m.shape().unflatten(node);
  }
}

}  // namespace

IdentityReport verify_identities(const GridManifold& m, std::uint64_t seed, int samples) {
  if (samples < 1) throw Error("identity verification needs at least one sample");

  IdentityReport rep;
  rep.metric_description = describe_metric(m);
  rep.seed = seed;
  rep.samples = samples;
  rep.checks = {
      {"adjointness", 0.0, -1, {0, 0, 0}},        {"hodge-split", 0.0, -1, {0, 0, 0}},
      {"weitzenboeck", 0.0, -1, {0, 0, 0}},       {"hodge-sampson-link", 0.0, -1, {0, 0, 0}},
      {"sampson-split", 0.0, -1, {0, 0, 0}},
  };

  NormalSampler rng(seed);
  const int band = default_band(m.shape());

  for (int s = 0; s < samples; ++s) {
    const OneFormField theta = random_one_form(m.shape(), band, rng);
    const SymTensorField phi = random_sym2(m.shape(), band, rng);

    // adjointness: scalar pairing identity
    {
      const double a = inner_l2(m, phi, killing_op(m, theta));
      const double b = inner_l2(m, div_sym2(m, phi), theta);
      const double err = std::abs(a - b) / (norm_l2(m, phi) * norm_l2(m, theta) + 1.0);
      rep.checks[0].error = std::max(rep.checks[0].error, err);
    }

    const OneFormField direct = ahlfors_direct(m, theta);
    update_field_check(rep.checks[1], m, direct, ahlfors_via_hodge(m, theta));
    update_field_check(rep.checks[2], m, direct, ahlfors_via_weitzenboeck(m, theta));
    {
      OneFormField rhs = sampson_laplacian(m, theta) + 2.0 * ricci_form(m, theta);
      update_field_check(rep.checks[3], m, hodge_laplacian(m, theta), rhs);
    }
    update_field_check(rep.checks[4], m, direct, ahlfors_via_sampson(m, theta));
  }
  return rep;
}

}  // namespace ahlfors
