#ifndef VIE2D_SPECFUN_HPP
#define VIE2D_SPECFUN_HPP

#include <complex>
#include <vector>

// Bessel and Hankel functions of integer order for real and complex
// arguments.  Ascending series are used for |z| <= 14; beyond that the
// Hankel asymptotic expansions seed forward recurrences in the order.
// Supported domain: 0 <= n <= 200, |z| < 1e4, z off the negative real
// axis, |Im z| <= 690 (double range).  Out-of-domain arguments throw
// std::domain_error.
namespace vie2d::specfun {

using Complex = std::complex<double>;

Complex bessel_j(int n, Complex z);
Complex bessel_y(int n, Complex z);
Complex hankel2(int n, Complex z);
Complex hankel2_prime(int n, Complex z);

// Real-argument fast path for the kernel evaluations in assembly loops;
// identical values to hankel2(n, Complex(x, 0)).
Complex hankel2_real(int n, double x);

// Orders 0..n_max in one sweep; cheaper than n_max individual calls when
// a whole series expansion is evaluated at the same argument.
std::vector<Complex> bessel_j_sequence(int n_max, Complex z);
std::vector<Complex> bessel_y_sequence(int n_max, Complex z);
std::vector<Complex> hankel2_sequence(int n_max, Complex z);

}  // namespace vie2d::specfun

#endif
