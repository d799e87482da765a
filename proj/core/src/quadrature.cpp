#include "vie2d/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vie2d {

namespace {

TriRule::Node sym(double a, double b, double c, double w) {
  return {{a, b, c}, w};
}

// Permutes a barycentric orbit into all distinct arrangements.
void push_orbit3(std::vector<TriRule::Node>& nodes, double a, double b,
                 double w) {
  nodes.push_back(sym(a, b, b, w));
  nodes.push_back(sym(b, a, b, w));
  nodes.push_back(sym(b, b, a, w));
}

void push_orbit6(std::vector<TriRule::Node>& nodes, double a, double b,
                 double c, double w) {
  nodes.push_back(sym(a, b, c, w));
  nodes.push_back(sym(a, c, b, w));
  nodes.push_back(sym(b, a, c, w));
  nodes.push_back(sym(b, c, a, w));
  nodes.push_back(sym(c, a, b, w));
  nodes.push_back(sym(c, b, a, w));
}

}  // namespace

TriRule triangle_rule(int n_points) {
  TriRule rule;
  switch (n_points) {
    case 1:
      rule.degree = 1;
      rule.nodes.push_back(sym(1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0));
      break;
    case 3:
      rule.degree = 2;
      push_orbit3(rule.nodes, 2.0 / 3, 1.0 / 6, 1.0 / 3);
      break;
    case 6:
      rule.degree = 4;
      push_orbit3(rule.nodes, 0.108103018168070, 0.445948490915965,
                  0.223381589678011);
      push_orbit3(rule.nodes, 0.816847572980459, 0.091576213509771,
                  0.109951743655322);
      break;
    case 12:
      rule.degree = 6;
      push_orbit3(rule.nodes, 0.873821971016996, 0.063089014491502,
                  0.050844906370207);
      push_orbit3(rule.nodes, 0.501426509658179, 0.249286745170910,
                  0.116786275726379);
      push_orbit6(rule.nodes, 0.636502499121399, 0.310352451033785,
                  0.053145049844816, 0.082851075618374);
      break;
    default:
      throw std::invalid_argument("triangle_rule: supported point counts are "
                                  "1, 3, 6, 12");
  }
  return rule;
}

EdgeRule edge_rule(int n_points) {
  if (n_points < 1)
    throw std::invalid_argument("edge_rule: need at least one point");
  // Gauss-Legendre nodes on [-1,1] by Newton iteration on P_n, then
  // mapped to [0,1].
  EdgeRule rule;
  const int n = n_points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes.push_back({0.5 * (1.0 - x), 0.5 * w});
    if (i != n - 1 - i) rule.nodes.push_back({0.5 * (1.0 + x), 0.5 * w});
  }
  return rule;
}

namespace {

// Antiderivative of ln(d^2 + u^2)/2 in u (perpendicular distance d >= 0).
double log_antiderivative(double u, double d) {
  double r2 = d * d + u * u;
  if (r2 == 0.0) return 0.0;
  double v = 0.5 * u * std::log(r2) - u;
  if (d > 0.0) v += d * std::atan(u / d);
  return v;
}

// Antiderivative of (d^2+u^2) ln(d^2+u^2) in u.
double sqlog_antiderivative(double u, double d) {
  double r2 = d * d + u * u;
  double poly = d * d * u + u * u * u / 3.0;
  double v = (r2 == 0.0) ? 0.0 : poly * std::log(r2);
  v -= 2.0 * (u * u * u / 9.0 + 2.0 / 3.0 * d * d * u);
  if (d > 0.0) v += 4.0 / 3.0 * d * d * d * std::atan(u / d);
  return v;
}

struct EdgeFrame {
  Vector2d tangent;
  double d;        // unsigned perpendicular distance from obs to the line
  double ua, ub;   // endpoint coordinates along the tangent, origin at foot
  bool degenerate;
};

EdgeFrame edge_frame(const Vector2d& a, const Vector2d& b,
                     const Vector2d& obs) {
  EdgeFrame f;
  Vector2d ab = b - a;
  double len = ab.norm();
  if (len == 0.0) {
    f.degenerate = true;
    return f;
  }
  f.degenerate = false;
  f.tangent = ab / len;
  f.ua = (a - obs).dot(f.tangent);
  f.ub = f.ua + len;
  Vector2d perp = (a - obs) - f.ua * f.tangent;
  f.d = perp.norm();
  return f;
}

}  // namespace

double log_integral_segment(const Vector2d& a, const Vector2d& b,
                            const Vector2d& obs) {
  EdgeFrame f = edge_frame(a, b, obs);
  if (f.degenerate)
    throw std::invalid_argument("log_integral_segment: zero-length segment");
  return log_antiderivative(f.ub, f.d) - log_antiderivative(f.ua, f.d);
}

double log_integral_triangle(const Vector2d& v0, const Vector2d& v1,
                             const Vector2d& v2, const Vector2d& obs) {
  // Divergence form: ln R = div_r' [(r'-obs)(ln R/2 - 1/4)], so the area
  // integral collapses to signed-distance-weighted edge integrals.
  double area2 = (v1 - v0).x() * (v2 - v0).y() - (v1 - v0).y() * (v2 - v0).x();
  if (area2 == 0.0)
    throw std::invalid_argument("log_integral_triangle: degenerate triangle");
  const double orient = area2 > 0.0 ? 1.0 : -1.0;
  const Vector2d* v[3] = {&v0, &v1, &v2};
  double total = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vector2d& a = *v[e];
    const Vector2d& b = *v[(e + 1) % 3];
    Vector2d ab = b - a;
    double len = ab.norm();
    if (len == 0.0)
      throw std::invalid_argument("log_integral_triangle: degenerate edge");
    // outward normal for CCW orientation
    Vector2d nrm = orient * Vector2d(ab.y(), -ab.x()) / len;
    double dist = (a - obs).dot(nrm);
    if (dist == 0.0) continue;
    double seg = log_integral_segment(a, b, obs);
    total += dist * (0.5 * seg - 0.25 * len);
  }
  return total;
}

Vector2d log_moment_triangle(const Vector2d& v0, const Vector2d& v1,
                             const Vector2d& v2, const Vector2d& obs) {
  // (r'-obs) ln R = grad_r' psi(R) with psi = R^2 (ln R)/2 - R^2/4, so the
  // moment is the boundary integral of psi times the outward normal.
  double area2 = (v1 - v0).x() * (v2 - v0).y() - (v1 - v0).y() * (v2 - v0).x();
  if (area2 == 0.0)
    throw std::invalid_argument("log_moment_triangle: degenerate triangle");
  const double orient = area2 > 0.0 ? 1.0 : -1.0;
  const Vector2d* v[3] = {&v0, &v1, &v2};
  Vector2d total = Vector2d::Zero();
  for (int e = 0; e < 3; ++e) {
    const Vector2d& a = *v[e];
    const Vector2d& b = *v[(e + 1) % 3];
    Vector2d ab = b - a;
    double len = ab.norm();
    if (len == 0.0)
      throw std::invalid_argument("log_moment_triangle: degenerate edge");
    Vector2d nrm = orient * Vector2d(ab.y(), -ab.x()) / len;
    EdgeFrame f = edge_frame(a, b, obs);
    // \int psi dl = 1/4 \int (d^2+u^2)(ln(d^2+u^2) - 1) du
    double il = sqlog_antiderivative(f.ub, f.d) - sqlog_antiderivative(f.ua, f.d);
    double ip = f.d * f.d * (f.ub - f.ua) +
                (f.ub * f.ub * f.ub - f.ua * f.ua * f.ua) / 3.0;
    total += nrm * 0.25 * (il - ip);
  }
  return total;
}

}  // namespace vie2d
