// Alpha persistence of a regular tetrahedron, printed as radii.

#include <cmath>
#include <cstdio>

#include "phkit/alpha.hpp"
#include "phkit/persistence.hpp"

int main() {
  const double s = std::sqrt(2.0) / 4;  // edge length 1
  phkit::PointCloud cloud(3, {s, s, s, s, -s, -s, -s, s, -s, -s, -s, s});
  const auto f = phkit::alpha_filtration(cloud);
  const auto r = phkit::compute_persistence(f);
  for (const auto& dg : r.diagrams) {
    std::printf("PD%d\n", dg.degree);
    for (const auto& p : dg.points)
      std::printf("  %.10f %.10f\n", phkit::unsquare(p.birth), phkit::unsquare(p.death));
  }
}
