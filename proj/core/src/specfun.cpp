#include "vie2d/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vie2d::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr int kMaxOrder = 200;
constexpr double kMaxAbs = 1e4;
// e^{|Im z|} factors exceed the double range past this point.
constexpr double kMaxImag = 690.0;
// Crossover between the ascending series and the asymptotic expansions.
constexpr double kSeriesRadius = 14.0;

void check_order(int n) {
  if (n < 0 || n > kMaxOrder)
    throw std::domain_error("specfun: order " + std::to_string(n) +
                            " outside supported range [0, 200]");
}

void check_argument(Complex z, bool allow_zero) {
  if (std::abs(z) >= kMaxAbs)
    throw std::domain_error("specfun: |z| exceeds supported range (1e4)");
  if (std::abs(z.imag()) > kMaxImag)
    throw std::domain_error("specfun: |Im z| too large for double range");
  if (z.imag() == 0.0 && z.real() < 0.0)
    throw std::domain_error("specfun: z on the negative real axis (branch cut)");
  if (!allow_zero && z == 0.0)
    throw std::domain_error("specfun: z = 0 is singular");
  if (std::abs(z) > kSeriesRadius && z.real() < 0.0 &&
      std::abs(z.imag()) < -z.real())
    throw std::domain_error("specfun: argument outside |arg z| <= 3pi/4 "
                            "asymptotic region");
}

// Ascending series, |z| <= 14.  The leading (z/2)^n/n! is formed in log
// space so large orders underflow gracefully instead of tripping on n!.
Complex j_series(int n, Complex z) {
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  Complex lead = std::exp(double(n) * std::log(0.5 * z) - std::lgamma(n + 1.0));
  if (lead == 0.0) return 0.0;
  const Complex q = -0.25 * z * z;
  Complex term = 1.0, sum = 1.0;
  for (int k = 1; k <= 400; ++k) {
    term *= q / (double(k) * double(n + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return lead * sum;
}

double harmonic(int k) {
  double h = 0.0;
  for (int j = 1; j <= k; ++j) h += 1.0 / j;
  return h;
}

Complex y0_series(Complex z) {
  const Complex j0 = j_series(0, z);
  const Complex lg = std::log(0.5 * z) + kEulerGamma;
  const Complex q = 0.25 * z * z;
  Complex u = 1.0, sum = 0.0;
  double sign = 1.0, h = 0.0;
  for (int k = 1; k <= 400; ++k) {
    u *= q / (double(k) * double(k));
    h += 1.0 / k;
    Complex term = sign * h * u;
    sum += term;
    sign = -sign;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0) && k > 4) break;
  }
  return (2.0 / kPi) * (lg * j0 + sum);
}

Complex y1_series(Complex z) {
  const Complex j1 = j_series(1, z);
  const Complex q = -0.25 * z * z;
  // sum_k (psi(k+1)+psi(k+2)) (-z^2/4)^k / (k!(k+1)!)
  Complex u = 1.0, sum = 0.0;
  for (int k = 0; k <= 400; ++k) {
    double psi_sum = -2.0 * kEulerGamma + harmonic(k) + harmonic(k + 1);
    Complex term = psi_sum * u;
    sum += term;
    u *= q / (double(k + 1) * double(k + 2));
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1.0) && k > 4) break;
  }
  return -2.0 / (kPi * z) + (2.0 / kPi) * std::log(0.5 * z) * j1 -
         (0.5 * z / kPi) * sum;
}

// Hankel asymptotic expansion for order 0 or 1 and |z| > 14.
// kind = -1 gives H^(2), kind = +1 gives H^(1); the two evaluations are
// exact conjugates for real z, which keeps J and Y exactly real there.
Complex hankel_asymptotic(int n, Complex z, int kind) {
  const double s = double(kind);
  const Complex chi = z - (0.5 * n + 0.25) * kPi;
  const double mu = 4.0 * n * n;
  Complex term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int k = 0; k < 60; ++k) {
    double odd = 2.0 * k + 1.0;
    term *= (mu - odd * odd) / (8.0 * double(k + 1)) * Complex(0.0, s) / z;
    if (std::abs(term) >= last) break;  // asymptotic tail started growing
    sum += term;
    last = std::abs(term);
    if (last < 1e-17) break;
  }
  return std::sqrt(2.0 / (kPi * z)) * std::exp(Complex(0.0, s) * chi) * sum;
}

struct HankelPair {
  Complex h1, h2;
};

// H^(1)_n and H^(2)_n by forward recurrence from the asymptotic seeds.
// Forward recurrence in the order is stable for both kinds (each carries
// the Y-dominant component).
HankelPair hankel_pair(int n, Complex z) {
  Complex h1a = hankel_asymptotic(0, z, +1), h2a = hankel_asymptotic(0, z, -1);
  if (n == 0) return {h1a, h2a};
  Complex h1b = hankel_asymptotic(1, z, +1), h2b = hankel_asymptotic(1, z, -1);
  for (int k = 1; k < n; ++k) {
    Complex f = 2.0 * double(k) / z;
    Complex h1c = f * h1b - h1a;
    Complex h2c = f * h2b - h2a;
    h1a = h1b; h1b = h1c;
    h2a = h2b; h2b = h2c;
  }
  return {h1b, h2b};
}

Complex y_forward(int n, Complex z, Complex y0, Complex y1) {
  if (n == 0) return y0;
  Complex a = y0, b = y1;
  for (int k = 1; k < n; ++k) {
    Complex c = 2.0 * double(k) / z * b - a;
    a = b;
    b = c;
  }
  return b;
}

// Real-argument series for orders 0 and 1, avoiding complex arithmetic.
void jy01_real(double x, double* j0, double* y0, double* j1, double* y1) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x) + kEulerGamma;
  {
    double term = 1.0, sum = 1.0, u = 1.0, s = 0.0, h = 0.0, sign = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -q / (double(k) * double(k));
      sum += term;
      u *= q / (double(k) * double(k));
      h += 1.0 / k;
      s += sign * h * u;
      sign = -sign;
      if (std::abs(term) < 1e-18 * std::abs(sum) && u < 1e-18) break;
    }
    *j0 = sum;
    if (y0) *y0 = (2.0 / kPi) * (lg * sum + s);
  }
  if (j1) {
    double term = 0.5 * x, sum = term;
    double u = 1.0, s = 0.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -q / (double(k) * double(k + 1));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    *j1 = sum;
    if (y1) {
      for (int k = 0; k <= 60; ++k) {
        double psi_sum = -2.0 * kEulerGamma + harmonic(k) + harmonic(k + 1);
        double t = psi_sum * u;
        s += t;
        u *= -q / (double(k + 1) * double(k + 2));
        if (std::abs(t) < 1e-18 * (std::abs(s) + 1.0) && k > 4) break;
      }
      *y1 = -2.0 / (kPi * x) + (2.0 / kPi) * std::log(0.5 * x) * sum -
            (0.5 * x / kPi) * s;
    }
  }
}

}  // namespace

Complex bessel_j(int n, Complex z) {
  check_order(n);
  check_argument(z, /*allow_zero=*/true);
  if (std::abs(z) <= kSeriesRadius) return j_series(n, z);
  auto [h1, h2] = hankel_pair(n, z);
  return 0.5 * (h1 + h2);
}

Complex bessel_y(int n, Complex z) {
  check_order(n);
  check_argument(z, /*allow_zero=*/false);
  if (std::abs(z) <= kSeriesRadius)
    return y_forward(n, z, y0_series(z), y1_series(z));
  auto [h1, h2] = hankel_pair(n, z);
  return Complex(0.0, -0.5) * (h1 - h2);
}

Complex hankel2(int n, Complex z) {
  check_order(n);
  check_argument(z, /*allow_zero=*/false);
  if (std::abs(z) <= kSeriesRadius) {
    Complex y = y_forward(n, z, y0_series(z), y1_series(z));
    return j_series(n, z) - Complex(0.0, 1.0) * y;
  }
  return hankel_pair(n, z).h2;
}

Complex hankel2_prime(int n, Complex z) {
  // H'_n = (H_{n-1} - H_{n+1})/2 with H_{-1} = -H_1.
  if (n == 0) return -hankel2(1, z);
  return 0.5 * (hankel2(n - 1, z) - hankel2(n + 1, z));
}

Complex hankel2_real(int n, double x) {
  if ((n == 0 || n == 1) && x > 0.0 && x <= kSeriesRadius) {
    double j0, y0, j1, y1;
    if (n == 0) {
      jy01_real(x, &j0, &y0, nullptr, nullptr);
      return {j0, -y0};
    }
    jy01_real(x, &j0, nullptr, &j1, &y1);
    return {j1, -y1};
  }
  return hankel2(n, Complex(x, 0.0));
}

std::vector<Complex> bessel_j_sequence(int n_max, Complex z) {
  check_order(n_max);
  check_argument(z, /*allow_zero=*/true);
  std::vector<Complex> out(n_max + 1);
  if (std::abs(z) <= kSeriesRadius) {
    for (int n = 0; n <= n_max; ++n) out[n] = j_series(n, z);
    return out;
  }
  Complex h1a = hankel_asymptotic(0, z, +1), h2a = hankel_asymptotic(0, z, -1);
  Complex h1b = hankel_asymptotic(1, z, +1), h2b = hankel_asymptotic(1, z, -1);
  out[0] = 0.5 * (h1a + h2a);
  if (n_max >= 1) out[1] = 0.5 * (h1b + h2b);
  for (int k = 1; k < n_max; ++k) {
    Complex f = 2.0 * double(k) / z;
    Complex h1c = f * h1b - h1a;
    Complex h2c = f * h2b - h2a;
    out[k + 1] = 0.5 * (h1c + h2c);
    h1a = h1b; h1b = h1c;
    h2a = h2b; h2b = h2c;
  }
  return out;
}

std::vector<Complex> bessel_y_sequence(int n_max, Complex z) {
  check_order(n_max);
  check_argument(z, /*allow_zero=*/false);
  std::vector<Complex> out(n_max + 1);
  if (std::abs(z) <= kSeriesRadius) {
    Complex a = y0_series(z);
    out[0] = a;
    if (n_max == 0) return out;
    Complex b = y1_series(z);
    out[1] = b;
    for (int k = 1; k < n_max; ++k) {
      Complex c = 2.0 * double(k) / z * b - a;
      out[k + 1] = c;
      a = b;
      b = c;
    }
    return out;
  }
  Complex h1a = hankel_asymptotic(0, z, +1), h2a = hankel_asymptotic(0, z, -1);
  Complex h1b = hankel_asymptotic(1, z, +1), h2b = hankel_asymptotic(1, z, -1);
  const Complex half_i(0.0, -0.5);
  out[0] = half_i * (h1a - h2a);
  if (n_max >= 1) out[1] = half_i * (h1b - h2b);
  for (int k = 1; k < n_max; ++k) {
    Complex f = 2.0 * double(k) / z;
    Complex h1c = f * h1b - h1a;
    Complex h2c = f * h2b - h2a;
    out[k + 1] = half_i * (h1c - h2c);
    h1a = h1b; h1b = h1c;
    h2a = h2b; h2b = h2c;
  }
  return out;
}

std::vector<Complex> hankel2_sequence(int n_max, Complex z) {
  check_order(n_max);
  check_argument(z, /*allow_zero=*/false);
  std::vector<Complex> out(n_max + 1);
  if (std::abs(z) <= kSeriesRadius) {
    auto j = bessel_j_sequence(n_max, z);
    auto y = bessel_y_sequence(n_max, z);
    for (int n = 0; n <= n_max; ++n)
      out[n] = j[n] - Complex(0.0, 1.0) * y[n];
    return out;
  }
  Complex h2a = hankel_asymptotic(0, z, -1);
  out[0] = h2a;
  if (n_max == 0) return out;
  Complex h2b = hankel_asymptotic(1, z, -1);
  out[1] = h2b;
  for (int k = 1; k < n_max; ++k) {
    Complex h2c = 2.0 * double(k) / z * h2b - h2a;
    out[k + 1] = h2c;
    h2a = h2b;
    h2b = h2c;
  }
  return out;
}

}  // namespace vie2d::specfun
