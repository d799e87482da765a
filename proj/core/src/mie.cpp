#include "vie2d/mie.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vie2d/specfun.hpp"

namespace vie2d {

namespace {

constexpr Complex kJ(0.0, 1.0);

Complex layer_wavenumber(const Material& m, const WaveParams& w) {
  Complex eps = complex_permittivity(m, w);
  return w.omega * std::sqrt(constants::mu0 * eps);
}

// Radial function table at one (wavenumber, radius) pair: values and
// derivatives with respect to the full argument, orders 0..n_max+1.
struct RadialTable {
  std::vector<Complex> j, y, h2;

  Complex value(char kind, int n) const {
    int m = std::abs(n);
    double sign = (n < 0 && (m & 1)) ? -1.0 : 1.0;
    switch (kind) {
      case 'j': return sign * j[m];
      case 'y': return sign * y[m];
      default: return sign * h2[m];
    }
  }
  Complex deriv(char kind, int n) const {
    int m = std::abs(n);
    double sign = (n < 0 && (m & 1)) ? -1.0 : 1.0;
    auto& f = kind == 'j' ? j : (kind == 'y' ? y : h2);
    Complex d = (m == 0) ? -f[1] : 0.5 * (f[m - 1] - f[m + 1]);
    return sign * d;
  }
};

RadialTable make_table(Complex z, int n_max, bool with_y, bool with_h2) {
  RadialTable t;
  t.j = specfun::bessel_j_sequence(n_max + 1, z);
  if (with_y) t.y = specfun::bessel_y_sequence(n_max + 1, z);
  if (with_h2) t.h2 = specfun::hankel2_sequence(n_max + 1, z);
  return t;
}

Complex incident_coeff(int n) {
  // j^{-n}: period-4 ladder valid for negative n too.
  switch (((n % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return -kJ;
    case 2: return -1.0;
    default: return kJ;
  }
}

}  // namespace

int truncation_order(double k0, double outer_radius) {
  if (!(k0 > 0.0) || !(outer_radius > 0.0))
    throw std::invalid_argument("truncation_order: arguments must be positive");
  double x = k0 * outer_radius;
  return std::max(10, int(std::ceil(x + 6.0 * std::cbrt(x) + 10.0)));
}

MieSolution solve_mie(const LayeredCylinder& cyl, const IncidentWave& inc,
                      const WaveParams& wave) {
  const int n_layers = int(cyl.radii.size());
  if (n_layers == 0 || cyl.layers.size() != cyl.radii.size())
    throw std::invalid_argument("solve_mie: need one material per layer radius");
  double prev = 0.0;
  for (double r : cyl.radii) {
    if (!(r > prev))
      throw std::invalid_argument(
          "solve_mie: radii must be strictly increasing and positive");
    prev = r;
  }
  for (const Material& m : cyl.layers) validate(m);

  MieSolution sol;
  sol.wave = wave;
  sol.geometry = cyl;
  sol.incidence_angle = inc.angle_rad;
  sol.h0_effective =
      inc.h0(wave) *
      std::exp(-kJ * wave.k0 * inc.direction().dot(cyl.center));
  sol.n_max = truncation_order(wave.k0, cyl.radii.back());
  const int nm = sol.n_max;
  sol.a.assign(2 * nm + 1, 0.0);
  sol.layer_coefs.assign(2 * nm + 1, {});

  std::vector<Complex> k(n_layers), eps(n_layers);
  for (int i = 0; i < n_layers; ++i) {
    k[i] = layer_wavenumber(cyl.layers[i], wave);
    eps[i] = complex_permittivity(cyl.layers[i], wave);
  }
  const Complex k_ext(wave.k0, 0.0);
  const Complex eps_ext(constants::eps0, 0.0);

  // Radial tables for every (medium, interface radius) pairing that the
  // continuity rows reference.
  std::vector<RadialTable> inner_at_own(n_layers);   // layer i at R_i
  std::vector<RadialTable> outer_at_inner(n_layers); // layer i+1 / ext at R_i
  for (int i = 0; i < n_layers; ++i) {
    inner_at_own[i] = make_table(k[i] * cyl.radii[i], nm, i > 0, false);
    if (i + 1 < n_layers)
      outer_at_inner[i] = make_table(k[i + 1] * cyl.radii[i], nm, true, false);
    else
      outer_at_inner[i] = make_table(k_ext * cyl.radii[i], nm, true, true);
  }

  const int dim = 2 * n_layers;
  double worst_residual = 0.0;
  for (int n = -nm; n <= nm; ++n) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < n_layers; ++i) {
      const int r1 = 2 * i, r2 = 2 * i + 1;
      const Complex fin = k[i] / eps[i];
      if (i == 0) {
        m(r1, 0) = inner_at_own[0].value('j', n);
        m(r2, 0) = fin * inner_at_own[0].deriv('j', n);
      } else {
        m(r1, 2 * i - 1) = inner_at_own[i].value('j', n);
        m(r1, 2 * i) = inner_at_own[i].value('y', n);
        m(r2, 2 * i - 1) = fin * inner_at_own[i].deriv('j', n);
        m(r2, 2 * i) = fin * inner_at_own[i].deriv('y', n);
      }
      if (i + 1 < n_layers) {
        const Complex fout = k[i + 1] / eps[i + 1];
        m(r1, 2 * i + 1) = -outer_at_inner[i].value('j', n);
        m(r1, 2 * i + 2) = -outer_at_inner[i].value('y', n);
        m(r2, 2 * i + 1) = -fout * outer_at_inner[i].deriv('j', n);
        m(r2, 2 * i + 2) = -fout * outer_at_inner[i].deriv('y', n);
      } else {
        const Complex fout = k_ext / eps_ext;
        const Complex jn = incident_coeff(n);
        m(r1, dim - 1) = -outer_at_inner[i].value('h', n);
        m(r2, dim - 1) = -fout * outer_at_inner[i].deriv('h', n);
        b(r1) = jn * outer_at_inner[i].value('j', n);
        b(r2) = fout * jn * outer_at_inner[i].deriv('j', n);
      }
    }

    // Column scaling tames the dynamic range between the tiny J_n and
    // the huge Y_n entries at orders well past k R.
    Eigen::VectorXd scale(dim);
    for (int c = 0; c < dim; ++c) {
      double s = m.col(c).cwiseAbs().maxCoeff();
      scale(c) = s > 0.0 ? s : 1.0;
    }
    Eigen::MatrixXcd ms = m * scale.cwiseInverse().asDiagonal();
    Eigen::VectorXcd xs = Eigen::FullPivLU<Eigen::MatrixXcd>(ms).solve(b);
    Eigen::VectorXcd x = xs.cwiseQuotient(scale.cast<Complex>());

    // Backward error, rows normalized by the magnitude of their terms.
    for (int r = 0; r < dim; ++r) {
      Complex acc = -b(r);
      double mag = std::abs(b(r));
      for (int c = 0; c < dim; ++c) {
        Complex term = m(r, c) * x(c);
        acc += term;
        mag += std::abs(term);
      }
      if (mag > 0.0)
        worst_residual = std::max(worst_residual, std::abs(acc) / mag);
    }

    sol.a[size_t(n + nm)] = x(dim - 1);
    sol.layer_coefs[size_t(n + nm)].assign(x.data(), x.data() + dim - 1);
  }
  sol.max_interface_residual = worst_residual;
  if (!(worst_residual < 1e-8))
    throw std::runtime_error(
        "solve_mie: interface continuity residual " +
        std::to_string(worst_residual) +
        " despite column scaling (extreme parameters?)");

  double amax = 0.0;
  for (const Complex& c : sol.a) amax = std::max(amax, std::abs(c));
  double alast = std::max(std::abs(sol.a.front()), std::abs(sol.a.back()));
  sol.truncation_ratio = amax > 0.0 ? alast / amax : 0.0;
  return sol;
}

std::pair<Complex, Complex> mie_scattered_field(const MieSolution& sol,
                                                const Vector2d& point) {
  Vector2d d = point - sol.geometry.center;
  double rho = d.norm();
  if (!(rho > sol.geometry.radii.back()))
    throw std::domain_error("mie_scattered_field: point not exterior");
  double phi = std::atan2(d.y(), d.x()) - sol.incidence_angle;
  const int nm = sol.n_max;
  auto h2 = specfun::hankel2_sequence(nm + 1, Complex(sol.wave.k0 * rho, 0.0));
  auto value = [&](int n) {
    int m = std::abs(n);
    return (n < 0 && (m & 1)) ? -h2[m] : h2[m];
  };
  auto deriv = [&](int n) {
    int m = std::abs(n);
    Complex dv = (m == 0) ? -h2[1] : 0.5 * (h2[m - 1] - h2[m + 1]);
    return (n < 0 && (m & 1)) ? -dv : dv;
  };
  const Complex front = 1.0 / (kJ * sol.wave.omega * constants::eps0);
  Complex e_rho = 0.0, e_phi = 0.0;
  for (int n = -nm; n <= nm; ++n) {
    Complex an = sol.coefficient(n);
    if (an == 0.0) continue;
    Complex phase = std::exp(kJ * double(n) * phi);
    e_rho += an * value(n) * kJ * double(n) * phase;
    e_phi += an * deriv(n) * phase;
  }
  e_rho *= front * sol.h0_effective / rho;
  e_phi *= -front * sol.wave.beta0 * sol.h0_effective;
  return {e_rho, e_phi};
}

ExteriorField mie_exterior_total_field(const MieSolution& sol,
                                       const Vector2d& point) {
  Vector2d d = point - sol.geometry.center;
  double rho = d.norm();
  if (!(rho > sol.geometry.radii.back()))
    throw std::domain_error("mie_exterior_total_field: point not exterior");
  double phi = std::atan2(d.y(), d.x()) - sol.incidence_angle;
  const int nm = sol.n_max;
  auto h2 = specfun::hankel2_sequence(nm + 1, Complex(sol.wave.k0 * rho, 0.0));
  auto jn = specfun::bessel_j_sequence(nm + 1, Complex(sol.wave.k0 * rho, 0.0));
  auto pick = [&](const std::vector<Complex>& f, int n) {
    int m = std::abs(n);
    return (n < 0 && (m & 1)) ? -f[m] : f[m];
  };
  auto pick_deriv = [&](const std::vector<Complex>& f, int n) {
    int m = std::abs(n);
    Complex dv = (m == 0) ? -f[1] : 0.5 * (f[m - 1] - f[m + 1]);
    return (n < 0 && (m & 1)) ? -dv : dv;
  };
  const Complex front = 1.0 / (kJ * sol.wave.omega * constants::eps0);
  Complex hz = 0.0, e_rho = 0.0, e_phi = 0.0;
  for (int n = -nm; n <= nm; ++n) {
    Complex cn = incident_coeff(n) * pick(jn, n) +
                 sol.coefficient(n) * pick(h2, n);
    Complex cn_deriv = incident_coeff(n) * pick_deriv(jn, n) +
                       sol.coefficient(n) * pick_deriv(h2, n);
    Complex phase = std::exp(kJ * double(n) * phi);
    hz += cn * phase;
    e_rho += cn * kJ * double(n) * phase;
    e_phi += cn_deriv * phase;
  }
  ExteriorField out;
  out.hz = sol.h0_effective * hz;
  out.e_rho = front * sol.h0_effective / rho * e_rho;
  out.e_phi = -front * sol.wave.k0 * sol.h0_effective * e_phi;
  return out;
}

}  // namespace vie2d
