#pragma once

// Bessel functions of the first kind, their derivatives, and positive roots.
// Evaluation uses the ascending series up to x = 12 and Miller's backward
// recurrence beyond; both deliver absolute accuracy better than 1e-12 for
// x <= 50 and the orders needed here (n <= 12).

#include <Eigen/Dense>

namespace shapelab {

double bessel_j(int order, double x);
double bessel_j_prime(int order, double x);

enum class RootKind { function, derivative };

// m-th positive root of J_n (function) or J_n' (derivative), m >= 1.
// Bracketed by sign scanning, bisected, then Newton-polished to ~1e-13.
double bessel_root(int order, int index, RootKind kind);

struct BesselRootTable {
  int order = 0;
  RootKind kind = RootKind::function;
  Eigen::ArrayXd roots;  // ascending, count m_max
};

BesselRootTable bessel_root_table(int order, RootKind kind, int count);

}  // namespace shapelab
