#include "shapelab/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

#include "shapelab/errors.hpp"

namespace shapelab {

namespace {

std::vector<std::complex<double>> forward_fft(const ArrayXd& values) {
  Eigen::FFT<double> fft;
  std::vector<double> in(values.data(), values.data() + values.size());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  return out;
}

ArrayXd inverse_fft_real(std::vector<std::complex<double>>& spectrum) {
  Eigen::FFT<double> fft;
  std::vector<double> out;
  fft.inv(out, spectrum);
  return Eigen::Map<ArrayXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

ArrayXd spectral_derivative(const ArrayXd& values) {
  const int n = static_cast<int>(values.size());
  auto spectrum = forward_fft(values);
  for (int k = 0; k < n; ++k) {
    int wave = (k <= n / 2) ? k : k - n;
    if (2 * k == n) wave = 0;  // Nyquist carries no derivative information
    spectrum[static_cast<size_t>(k)] *= std::complex<double>(0.0, wave);
  }
  return inverse_fft_real(spectrum);
}

FourierCoeffs fourier_analyze(const ArrayXd& values, int harmonics_max) {
  const int n = static_cast<int>(values.size());
  auto spectrum = forward_fft(values);
  FourierCoeffs coeffs;
  coeffs.cos_coeffs = ArrayXd::Zero(harmonics_max + 1);
  coeffs.sin_coeffs = ArrayXd::Zero(harmonics_max + 1);
  coeffs.cos_coeffs[0] = spectrum[0].real() / n;
  for (int m = 1; m <= harmonics_max && m <= n / 2; ++m) {
    const double scale = (2 * m == n) ? 1.0 / n : 2.0 / n;
    coeffs.cos_coeffs[m] = scale * spectrum[static_cast<size_t>(m)].real();
    coeffs.sin_coeffs[m] = -scale * spectrum[static_cast<size_t>(m)].imag();
  }
  return coeffs;
}

ArrayXd fourier_synthesize(const FourierCoeffs& coeffs, int node_count) {
  const int mmax = static_cast<int>(coeffs.cos_coeffs.size()) - 1;
  ArrayXd values = ArrayXd::Zero(node_count);
  for (int i = 0; i < node_count; ++i) {
    const double theta = 2.0 * M_PI * i / node_count;
    double acc = 0.0;
    for (int m = 0; m <= mmax; ++m)
      acc += coeffs.cos_coeffs[m] * std::cos(m * theta) +
             coeffs.sin_coeffs[m] * std::sin(m * theta);
    values[i] = acc;
  }
  return values;
}

Eigen::VectorXd cyclic_tridiagonal_solve(const Eigen::VectorXd& lower,
                                         const Eigen::VectorXd& diag,
                                         const Eigen::VectorXd& upper,
                                         const Eigen::VectorXd& rhs) {
  const Eigen::Index n = diag.size();
  if (n < 3)
    throw SingularOperator("cyclic tridiagonal system needs at least 3 rows");

  // Sherman-Morrison: absorb the two corner entries into a rank-one update.
  auto thomas = [&](Eigen::VectorXd b, Eigen::VectorXd d) {
    Eigen::VectorXd c_prime(n), d_prime(n);
    c_prime[0] = upper[0] / b[0];
    d_prime[0] = d[0] / b[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      const double m = b[i] - lower[i] * c_prime[i - 1];
      if (std::abs(m) < 1e-300)
        throw SingularOperator("tridiagonal elimination broke down");
      c_prime[i] = upper[i] / m;
      d_prime[i] = (d[i] - lower[i] * d_prime[i - 1]) / m;
    }
    Eigen::VectorXd x(n);
    x[n - 1] = d_prime[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    return x;
  };

  const double corner_low = lower[0];     // entry (0, n-1)
  const double corner_up = upper[n - 1];  // entry (n-1, 0)
  const double gamma = -diag[0];

  Eigen::VectorXd b = diag;
  b[0] -= gamma;
  b[n - 1] -= corner_low * corner_up / gamma;

  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  u[0] = gamma;
  u[n - 1] = corner_up;

  Eigen::VectorXd y = thomas(b, rhs);
  Eigen::VectorXd z = thomas(b, u);

  const double factor = (y[0] + corner_low * y[n - 1] / gamma) /
                        (1.0 + z[0] + corner_low * z[n - 1] / gamma);
  return y - factor * z;
}

PeriodicCubicSpline::PeriodicCubicSpline(const ArrayXd& knots, const ArrayXd& values,
                                         double period)
    : knots_(knots), values_(values), period_(period) {
  const Eigen::Index n = knots.size();
  if (n != values.size()) throw GridMismatch("spline knot/value count mismatch");
  if (n < 3) throw GridMismatch("periodic spline needs at least 3 knots");

  // Gap i spans knots_[i] .. knots_[i+1] (last one wraps).
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? knots[i + 1] : knots[0] + period;
    h[i] = next - knots[i];
    if (h[i] <= 0) throw GridMismatch("spline knots not strictly increasing");
  }

  Eigen::VectorXd lower(n), diag(n), upper(n), rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index prev = (i + n - 1) % n;
    const Eigen::Index next = (i + 1) % n;
    lower[i] = h[prev] / 6.0;
    diag[i] = (h[prev] + h[i]) / 3.0;
    upper[i] = h[i] / 6.0;
    rhs[i] = (values[next] - values[i]) / h[i] - (values[i] - values[prev]) / h[prev];
  }
  second_derivs_ = cyclic_tridiagonal_solve(lower, diag, upper, rhs).array();
}

double PeriodicCubicSpline::operator()(double x) const {
  const Eigen::Index n = knots_.size();
  double t = std::fmod(x - knots_[0], period_);
  if (t < 0) t += period_;
  t += knots_[0];

  // Locate the gap containing t.
  Eigen::Index lo = 0, hi = n;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (knots_[mid] <= t)
      lo = mid;
    else
      hi = mid;
  }
  const Eigen::Index next = (lo + 1) % n;
  const double x0 = knots_[lo];
  const double x1 = (lo + 1 < n) ? knots_[lo + 1] : knots_[0] + period_;
  const double hgap = x1 - x0;
  const double a = (x1 - t) / hgap;
  const double b = (t - x0) / hgap;
  return a * values_[lo] + b * values_[next] +
         ((a * a * a - a) * second_derivs_[lo] + (b * b * b - b) * second_derivs_[next]) *
             hgap * hgap / 6.0;
}

ArrayXd PeriodicCubicSpline::operator()(const ArrayXd& x) const {
  ArrayXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
  return out;
}

}  // namespace shapelab
