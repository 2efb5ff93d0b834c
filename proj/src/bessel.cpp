#include "shapelab/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "shapelab/errors.hpp"

namespace shapelab {

namespace {

// Ascending series with compensated summation; adequate to ~1e-13 absolute
// for x <= 12 where cancellation stays below ~1e4.
double bessel_series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;  // (x/2)^n / n!

  double sum = 0.0, comp = 0.0;
  const double half2 = half * half;
  for (int k = 0; k < 200; ++k) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    term *= -half2 / ((k + 1.0) * (n + k + 1.0));
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30) && k > n) break;
  }
  return sum;
}

// Miller's backward recurrence, normalized by J_0 + 2 sum J_{2k} = 1.
double bessel_miller(int n, double x) {
  const int start = static_cast<int>(x + 14.0 + 9.0 * std::cbrt(x)) + n;
  int m = start + (start % 2);  // even start keeps the normalization simple

  double fp = 0.0;        // f_{m+1}
  double fc = 1e-160;     // f_m
  double norm = 0.0;
  double target = (n >= m) ? fc : 0.0;

  for (int k = m; k >= 1; --k) {
    double fm = (2.0 * k / x) * fc - fp;
    fp = fc;
    fc = fm;
    if (k - 1 == n) target = fc;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * fc;
    if (std::abs(fc) > 1e250) {
      fc *= 1e-250;
      fp *= 1e-250;
      norm *= 1e-250;
      target *= 1e-250;
    }
  }
  norm += fc;  // f_0
  return target / norm;
}

}  // namespace

double bessel_j(int order, double x) {
  if (order < 0) throw std::invalid_argument("bessel order must be >= 0");
  if (x < 0.0) throw std::invalid_argument("bessel argument must be >= 0");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  return (x <= 12.0) ? bessel_series(order, x) : bessel_miller(order, x);
}

double bessel_j_prime(int order, double x) {
  if (x == 0.0) {
    if (order == 1) return 0.5;
    return 0.0;
  }
  if (order == 0) return -bessel_j(1, x);
  return bessel_j(order - 1, x) - (order / x) * bessel_j(order, x);
}

namespace {

// Second derivative from the Bessel ODE: x^2 J'' + x J' + (x^2 - n^2) J = 0.
double bessel_j_second(int n, double x) {
  return ((n * n - x * x) * bessel_j(n, x) / x - bessel_j_prime(n, x)) / x;
}

double refine_root(int n, RootKind kind, double lo, double hi) {
  auto f = [&](double x) {
    return kind == RootKind::function ? bessel_j(n, x) : bessel_j_prime(n, x);
  };
  auto df = [&](double x) {
    return kind == RootKind::function ? bessel_j_prime(n, x) : bessel_j_second(n, x);
  };

  double flo = f(lo);
  int iterations = 0;
  while (hi - lo > 1e-13 * hi) {
    if (++iterations > 200) throw ConvergenceFailure("bessel root bisection stalled");
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }

  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double d = df(x);
    if (d == 0.0) break;
    const double step = f(x) / d;
    const double next = x - step;
    if (next <= lo - 1.0 || next >= hi + 1.0) break;
    x = next;
  }
  return x;
}

}  // namespace

double bessel_root(int order, int index, RootKind kind) {
  if (index < 1) throw std::invalid_argument("root index must be >= 1");
  return bessel_root_table(order, kind, index).roots[index - 1];
}

BesselRootTable bessel_root_table(int order, RootKind kind, int count) {
  auto f = [&](double x) {
    return kind == RootKind::function ? bessel_j(order, x) : bessel_j_prime(order, x);
  };

  // Roots of J_n and J_n' are separated by more than pi/2 in the range of
  // interest, so a pi/8 scan cannot skip a sign change.
  const double step = M_PI / 8.0;
  std::vector<double> roots;
  double x_prev = 0.05;
  double f_prev = f(x_prev);
  int guard = 0;
  while (static_cast<int>(roots.size()) < count) {
    if (++guard > 100000) throw ConvergenceFailure("bessel root scan ran away");
    const double x_next = x_prev + step;
    const double f_next = f(x_next);
    if ((f_prev <= 0.0) != (f_next <= 0.0))
      roots.push_back(refine_root(order, kind, x_prev, x_next));
    x_prev = x_next;
    f_prev = f_next;
  }

  BesselRootTable table;
  table.order = order;
  table.kind = kind;
  table.roots = Eigen::Map<Eigen::ArrayXd>(roots.data(), count);

  for (int i = 0; i < count; ++i) {
    const double residual = std::abs(f(table.roots[i]));
    if (residual > 1e-12)
      throw ConvergenceFailure("bessel root residual above 1e-12");
  }
  return table;
}

}  // namespace shapelab
