#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ahlfors/tensor_ops.hpp"

namespace ahlfors {

// Second-order operators on one-forms, each assembled literally from the
// first-order pieces so the identities below compare genuinely different
// compositions.

// Hodge Laplacian d delta + delta d.
OneFormField hodge_laplacian(const GridManifold& m, const OneFormField& theta);

// Sampson Laplacian 2 delta delta* - d delta.
OneFormField sampson_laplacian(const GridManifold& m, const OneFormField& theta);

// Ricci curvature applied to the raised argument: (Ric theta)_j = Ric_kj theta^k.
OneFormField ricci_form(const GridManifold& m, const OneFormField& theta);

// S*S theta, the direct composition through sym-2 tensors.
OneFormField ahlfors_direct(const GridManifold& m, const OneFormField& theta);

// The same operator through three alternative routes:
//   (1/2) delta d + ((n-1)/n) d delta - Ric           (form calculus + curvature)
OneFormField ahlfors_via_hodge(const GridManifold& m, const OneFormField& theta);
//   (1/2) Hodge + ((n-2)/2n) d delta - Ric            (Weitzenboeck shuffle)
OneFormField ahlfors_via_weitzenboeck(const GridManifold& m, const OneFormField& theta);
//   (1/2) Sampson + ((n-2)/2n) d delta                (curvature-free)
OneFormField ahlfors_via_sampson(const GridManifold& m, const OneFormField& theta);

struct IdentityCheck {
  std::string name;
  double error = 0.0;        // field identities: |L-R|_2 / (|L|_2 + |R|_2 + eps);
                             // scalar identities: |a-b| / (|phi| |theta| + 1)
  Index worst_node = -1;     // flat node index of the largest pointwise residual
  std::array<Index, 3> worst_coords{0, 0, 0};
};

struct IdentityReport {
  std::string metric_description;
  std::uint64_t seed = 0;
  int samples = 0;
  std::vector<IdentityCheck> checks;

  double max_error() const {
    double e = 0.0;
    for (const auto& c : checks) e = std::max(e, c.error);
    return e;
  }
  bool all_below(double tol) const { return max_error() <= tol; }
};

// Draw `samples` seeded band-limited random fields and measure the worst
// relative error of each operator identity:
//   adjointness        <phi, delta* theta> = <delta phi, theta>
//   hodge-split        S*S = (1/2) delta d + ((n-1)/n) d delta - Ric
//   weitzenboeck       S*S = (1/2) Hodge + ((n-2)/2n) d delta - Ric
//   hodge-sampson-link Hodge = Sampson + 2 Ric
//   sampson-split      S*S = (1/2) Sampson + ((n-2)/2n) d delta
IdentityReport verify_identities(const GridManifold& m, std::uint64_t seed, int samples);

}  // namespace ahlfors
