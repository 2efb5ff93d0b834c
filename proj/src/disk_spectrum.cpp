#include "shapelab/disk_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapelab {

namespace {

// L2 norm over the disk of J_n(root r / R) {cos,sin}(n theta):
//   Dirichlet (J_n(root) = 0):  ang * R^2/2 * J_{n+1}(root)^2
//   Neumann  (J_n'(root) = 0):  ang * R^2/2 * (1 - n^2/root^2) * J_n(root)^2
// with ang = 2 pi for n = 0 and pi otherwise.
DiskEigen make_mode(double radius, BoundaryCondition bc, int n, int m, double root) {
  DiskEigen mode;
  mode.radius = radius;
  mode.bc = bc;
  mode.angular_order = n;
  mode.radial_index = m;
  mode.root = root;
  mode.lambda = (root / radius) * (root / radius);

  const double ang = (n == 0) ? 2.0 * M_PI : M_PI;
  if (bc == BoundaryCondition::dirichlet) {
    const double jn1 = bessel_j(n + 1, root);
    const double norm = std::sqrt(ang * 0.5 * radius * radius * jn1 * jn1);
    mode.boundary_value = 0.0;
    // radial derivative at r = R: (root/R) J_n'(root) = -(root/R) J_{n+1}(root)
    mode.boundary_flux = -(root / radius) * jn1 / norm;
  } else {
    const double jn = bessel_j(n, root);
    const double factor = 1.0 - static_cast<double>(n) * n / (root * root);
    const double norm = std::sqrt(ang * 0.5 * radius * radius * factor * jn * jn);
    mode.boundary_value = jn / norm;
    mode.boundary_flux = 0.0;
  }
  return mode;
}

}  // namespace

std::vector<DiskEigen> disk_spectrum(double radius, BoundaryCondition bc, int count) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  if (count < 1) throw std::invalid_argument("count must be >= 1");

  std::vector<DiskEigen> modes;
  if (bc == BoundaryCondition::neumann) {
    DiskEigen constant;
    constant.radius = radius;
    constant.bc = bc;
    constant.lambda = 0.0;
    constant.angular_order = 0;
    constant.radial_index = 0;
    constant.root = 0.0;
    constant.boundary_value = 1.0 / (radius * std::sqrt(M_PI));
    constant.boundary_flux = 0.0;
    modes.push_back(constant);
  }

  // Interlacing puts the `count` smallest roots within n, m <= count + 1.
  const int cap = count + 2;
  const RootKind kind =
      bc == BoundaryCondition::dirichlet ? RootKind::function : RootKind::derivative;
  for (int n = 0; n <= cap; ++n) {
    const BesselRootTable table = bessel_root_table(n, kind, cap);
    for (int m = 1; m <= cap; ++m) {
      const DiskEigen mode = make_mode(radius, bc, n, m, table.roots[m - 1]);
      modes.push_back(mode);
      if (n >= 1) modes.push_back(mode);  // cos and sin copies
    }
  }

  std::stable_sort(modes.begin(), modes.end(),
                   [](const DiskEigen& a, const DiskEigen& b) { return a.lambda < b.lambda; });
  modes.resize(static_cast<size_t>(count));
  return modes;
}

bool max_principle_holds(double k, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  return std::abs(k) < bessel_root(0, 1, RootKind::function) / radius;
}

double lambda_disk(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const DiskEigen first = disk_spectrum(radius, BoundaryCondition::dirichlet, 1)[0];
  return std::abs(first.boundary_flux);
}

}  // namespace shapelab
