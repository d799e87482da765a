#include "vie2d/assembly.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "vie2d/specfun.hpp"

namespace vie2d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kJ(0.0, 1.0);

// Elements closer than about two diameters interact through the
// smooth/log kernel split; farther pairs use plain quadrature.
constexpr double kNearDiameterFactor = 2.0;

bool near_pair(const Vector2d& ca, double da, const Vector2d& cb, double db) {
  double d = std::max(da, db);
  return (ca - cb).norm() <= kNearDiameterFactor * d + 0.5 * (da + db);
}

struct TriData {
  std::array<Vector2d, 3> v;
  std::vector<Vector2d> qp;  // mapped quadrature points
  Vector2d centroid;
  double area = 0.0;
  double diameter = 0.0;
};

std::vector<TriData> precompute_triangles(const Mesh& mesh,
                                          const TriRule& rule) {
  std::vector<TriData> out(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    TriData& d = out[t];
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) d.v[i] = mesh.vertex(tri.v[i]);
    d.qp.reserve(rule.nodes.size());
    for (const auto& n : rule.nodes)
      d.qp.push_back(rule.map(n, d.v[0], d.v[1], d.v[2]));
    d.centroid = mesh.centroid(t);
    d.area = mesh.area(t);
    d.diameter = mesh.diameter(t);
  }
  return out;
}

Complex green_of(double k0, const Vector2d& a, const Vector2d& b) {
  double r = (a - b).norm();
  return 0.25 * kJ * specfun::hankel2_real(0, k0 * r);
}

// Pair accumulators shared by the vector- and scalar-potential entries;
// weights are the normalized rule weights, area factors enter at scatter.
struct PairSums {
  Complex s = 0;                // sum w w G
  Complex ux = 0, uy = 0;       // sum w w G r_i
  Complex vx = 0, vy = 0;       // sum w w G r_j
  Complex m2 = 0;               // sum w w G (r_i . r_j)
  // log-kernel closed-form pieces (near pairs only)
  double p = 0;                 // sum w_i L_i
  double prx = 0, pry = 0;      // sum w_i L_i r_i
  double prr = 0;               // sum w_i L_i (r_i . r_i)
  double qx = 0, qy = 0;        // sum w_i M_i
  double qr = 0;                // sum w_i (r_i . M_i)
  bool near = false;
};

PairSums pair_sums(const WaveParams& wave, const TriRule& rule,
                   const TriData& tp, const TriData& tq) {
  PairSums out;
  out.near = near_pair(tp.centroid, tp.diameter, tq.centroid, tq.diameter);
  const size_t nq = rule.nodes.size();
  for (size_t i = 0; i < nq; ++i) {
    const double wi = rule.nodes[i].weight;
    const Vector2d& ri = tp.qp[i];
    for (size_t j = 0; j < nq; ++j) {
      const double w = wi * rule.nodes[j].weight;
      const Vector2d& rj = tq.qp[j];
      Complex g = out.near ? green_smooth(wave, ri, rj)
                           : green_of(wave.k0, ri, rj);
      Complex wg = w * g;
      out.s += wg;
      out.ux += wg * ri.x();
      out.uy += wg * ri.y();
      out.vx += wg * rj.x();
      out.vy += wg * rj.y();
      out.m2 += wg * ri.dot(rj);
    }
    if (out.near) {
      double li = log_integral_triangle(tq.v[0], tq.v[1], tq.v[2], ri);
      Vector2d mi = log_moment_triangle(tq.v[0], tq.v[1], tq.v[2], ri);
      out.p += wi * li;
      out.prx += wi * li * ri.x();
      out.pry += wi * li * ri.y();
      out.prr += wi * li * ri.squaredNorm();
      out.qx += wi * mi.x();
      out.qy += wi * mi.y();
      out.qr += wi * ri.dot(mi);
    }
  }
  return out;
}

struct Sink {
  MatrixXcd* za = nullptr;
  MatrixXcd* zphi = nullptr;
};

// Scatters one triangle pair into up to nine (m,n) entries.
void scatter_pair(const PairSums& ps, const TriData& tp, const TriData& tq,
                  const std::array<int, 3>& rows,
                  const std::array<int, 3>& row_signs,
                  const std::array<int, 3>& cols,
                  const std::array<int, 3>& col_signs, Complex chi_q,
                  double k0, int col_begin, int col_end, const Sink& sink) {
  const Complex za_front = kJ * k0 * chi_q * 0.25;
  const Complex za_sing = kJ * k0 * chi_q / (8.0 * kPi * tq.area);
  const Complex zphi_front = chi_q / (kJ * k0);
  const Complex zphi_sing = zphi_front / (2.0 * kPi * tq.area);
  for (int b = 0; b < 3; ++b) {
    const int n = cols[b];
    if (n < col_begin || n >= col_end) continue;
    const Vector2d& vb = tq.v[b];
    for (int a = 0; a < 3; ++a) {
      const int m = rows[a];
      if (m < 0) continue;
      const Vector2d& va = tp.v[a];
      const double sgn = double(row_signs[a] * col_signs[b]);
      if (sink.za) {
        Complex core = ps.m2 - (ps.ux * vb.x() + ps.uy * vb.y()) -
                       (ps.vx * va.x() + ps.vy * va.y()) + ps.s * va.dot(vb);
        Complex entry = za_front * core;
        if (ps.near) {
          double moment = ps.qr - (va.x() * ps.qx + va.y() * ps.qy) + ps.prr -
                          (va.x() + vb.x()) * ps.prx -
                          (va.y() + vb.y()) * ps.pry + va.dot(vb) * ps.p;
          entry += za_sing * moment;
        }
        (*sink.za)(m, n) += sgn * entry;
      }
      if (sink.zphi) {
        Complex entry = zphi_front * ps.s;
        if (ps.near) entry += zphi_sing * ps.p;
        (*sink.zphi)(m, n) += sgn * entry;
      }
    }
  }
}

// Line charges: wherever chi jumps across a shared edge, the source
// divergence carries the edge density -(chi+ - chi-) f.n with
// f.n = 1/length, integrated against the test charges with the 1D rule.
void accumulate_line_charges(const Mesh& mesh,
                             const std::vector<RwgEdge>& edges,
                             std::span<const Complex> chi,
                             const WaveParams& wave, const TriRule& tri_rule,
                             const EdgeRule& erule,
                             const std::vector<TriData>& tris,
                             const std::vector<std::array<int, 3>>& tri_edges,
                             int col_begin, int col_end, MatrixXcd& zphi) {
  const double k0 = wave.k0;
  for (const RwgEdge& e : edges) {
    if (e.index < col_begin || e.index >= col_end) continue;
    Complex jump = chi[e.tri_plus] - chi[e.tri_minus];
    if (jump == 0.0) continue;
    const Complex front = -jump / (kJ * k0);
    const Vector2d mid = 0.5 * (e.edge_a + e.edge_b);
    std::vector<Vector2d> ep;
    ep.reserve(erule.nodes.size());
    for (const auto& n : erule.nodes)
      ep.push_back(e.edge_a + n.t * (e.edge_b - e.edge_a));
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const TriData& tp = tris[t];
      bool near = near_pair(tp.centroid, tp.diameter, mid, e.length);
      Complex acc = 0;
      for (size_t i = 0; i < tri_rule.nodes.size(); ++i) {
        const double wi = tri_rule.nodes[i].weight;
        const Vector2d& ri = tp.qp[i];
        for (size_t j = 0; j < erule.nodes.size(); ++j) {
          Complex g =
              near ? green_smooth(wave, ri, ep[j]) : green_of(k0, ri, ep[j]);
          acc += wi * erule.nodes[j].weight * g;
        }
        if (near)
          acc += wi / (2.0 * kPi * e.length) *
                 log_integral_segment(e.edge_a, e.edge_b, ri);
      }
      for (int a = 0; a < 3; ++a) {
        int m = tri_edges[t][a];
        if (m < 0) continue;
        zphi(m, e.index) += double(edges[m].sign(t)) * front * acc;
      }
    }
  }
}

void assemble_potentials(const Mesh& mesh, const std::vector<RwgEdge>& edges,
                         std::span<const Complex> chi, const WaveParams& wave,
                         const TriRule& tri_rule, const EdgeRule& erule,
                         int threads, Sink sink, bool with_line_charges) {
  const int n_rwg = int(edges.size());
  const auto tri_edges = triangle_edge_table(mesh, edges);
  const auto tris = precompute_triangles(mesh, tri_rule);

  auto signs_of = [&](int t, const std::array<int, 3>& row) {
    std::array<int, 3> s{0, 0, 0};
    for (int a = 0; a < 3; ++a)
      if (row[a] >= 0) s[a] = edges[row[a]].sign(t);
    return s;
  };

  auto worker = [&](int col_begin, int col_end) {
    for (int q = 0; q < mesh.num_triangles(); ++q) {
      const auto& cols = tri_edges[q];
      bool mine = false;
      for (int b = 0; b < 3; ++b)
        if (cols[b] >= col_begin && cols[b] < col_end) mine = true;
      if (!mine) continue;
      const Complex chi_q = chi[q];
      if (chi_q == 0.0) continue;
      const auto col_signs = signs_of(q, cols);
      for (int p = 0; p < mesh.num_triangles(); ++p) {
        PairSums ps = pair_sums(wave, tri_rule, tris[p], tris[q]);
        scatter_pair(ps, tris[p], tris[q], tri_edges[p],
                     signs_of(p, tri_edges[p]), cols, col_signs, chi_q,
                     wave.k0, col_begin, col_end, sink);
      }
    }
    if (with_line_charges && sink.zphi)
      accumulate_line_charges(mesh, edges, chi, wave, tri_rule, erule, tris,
                              tri_edges, col_begin, col_end, *sink.zphi);
  };

  threads = std::max(1, threads);
  if (threads == 1 || n_rwg < 2 * threads) {
    worker(0, n_rwg);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n_rwg + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int begin = t * chunk, end = std::min(n_rwg, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(worker, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<Complex> make_contrast_table(const Mesh& mesh,
                                         std::span<const Material> materials,
                                         const WaveParams& wave) {
  if (int(materials.size()) < mesh.num_regions())
    throw std::invalid_argument(
        "make_contrast_table: fewer materials than mesh regions");
  std::vector<Complex> per_region;
  per_region.reserve(materials.size());
  for (const Material& m : materials) {
    validate(m);
    per_region.push_back(contrast(m, wave));
  }
  std::vector<Complex> out(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    out[t] = per_region[mesh.triangle(t).region];
  return out;
}

SparseMatrixXcd assemble_gram(const Mesh& mesh,
                              const std::vector<RwgEdge>& edges,
                              std::span<const Complex> chi, double k0) {
  const int n = int(edges.size());
  const auto tri_edges = triangle_edge_table(mesh, edges);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(size_t(mesh.num_triangles()) * 9);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    std::array<Vector2d, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = mesh.vertex(tri.v[i]);
    std::array<Vector2d, 3> mid = {0.5 * (v[0] + v[1]), 0.5 * (v[1] + v[2]),
                                   0.5 * (v[2] + v[0])};
    const double area = mesh.area(t);
    const Complex front = (1.0 - chi[t]) / (kJ * k0);
    for (int a = 0; a < 3; ++a) {
      int m = tri_edges[t][a];
      if (m < 0) continue;
      double sa = double(edges[m].sign(t));
      for (int b = 0; b < 3; ++b) {
        int nn = tri_edges[t][b];
        if (nn < 0) continue;
        double sb = double(edges[nn].sign(t));
        // Exact polynomial moment of the unsigned half-basis product:
        // the three-midpoint rule integrates quadratics exactly.
        double c = 0.0;
        for (int k = 0; k < 3; ++k) c += (mid[k] - v[a]).dot(mid[k] - v[b]);
        c /= 12.0 * area;
        trips.emplace_back(m, nn, front * (sa * sb * c));
      }
    }
  }
  SparseMatrixXcd out(n, n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

MatrixXcd assemble_vector_potential(const Mesh& mesh,
                                    const std::vector<RwgEdge>& edges,
                                    std::span<const Complex> chi, double k0,
                                    const TriRule& tri_rule, int threads) {
  WaveParams wave;
  wave.k0 = k0;
  MatrixXcd out = MatrixXcd::Zero(edges.size(), edges.size());
  assemble_potentials(mesh, edges, chi, wave, tri_rule, edge_rule(2), threads,
                      {&out, nullptr}, false);
  return out;
}

MatrixXcd assemble_scalar_potential(const Mesh& mesh,
                                    const std::vector<RwgEdge>& edges,
                                    std::span<const Complex> chi, double k0,
                                    const TriRule& tri_rule,
                                    const EdgeRule& erule, int threads) {
  WaveParams wave;
  wave.k0 = k0;
  MatrixXcd out = MatrixXcd::Zero(edges.size(), edges.size());
  assemble_potentials(mesh, edges, chi, wave, tri_rule, erule, threads,
                      {nullptr, &out}, true);
  return out;
}

VectorXcd assemble_rhs(const Mesh& mesh, const std::vector<RwgEdge>& edges,
                       const IncidentWave& inc, const WaveParams& wave,
                       const TriRule& tri_rule) {
  const auto tri_edges = triangle_edge_table(mesh, edges);
  VectorXcd e = VectorXcd::Zero(edges.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    std::array<Vector2d, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = mesh.vertex(tri.v[i]);
    for (const auto& node : tri_rule.nodes) {
      Vector2d r = tri_rule.map(node, v[0], v[1], v[2]);
      Vector2c einc = incident_field(inc, wave, r);
      for (int a = 0; a < 3; ++a) {
        int m = tri_edges[t][a];
        if (m < 0) continue;
        double s = double(edges[m].sign(t));
        // area * w * (r - va)/(2A) . E = (w/2) (r - va) . E
        e(m) += s * 0.5 * node.weight *
                (einc.x() * (r - v[a]).x() + einc.y() * (r - v[a]).y());
      }
    }
  }
  return e;
}

VectorXcd SystemMatrices::apply(const VectorXcd& x) const {
  VectorXcd y = gram * x;
  y.noalias() += z_vector * x;
  if (!combined && z_scalar.size() > 0) y.noalias() += z_scalar * x;
  return y;
}

VectorXcd SystemMatrices::diagonal() const {
  VectorXcd d = VectorXcd(gram.diagonal()) + z_vector.diagonal();
  if (!combined && z_scalar.size() > 0) d += z_scalar.diagonal();
  return d;
}

MatrixXcd SystemMatrices::dense_sum() const {
  MatrixXcd a = MatrixXcd(gram) + z_vector;
  if (!combined && z_scalar.size() > 0) a += z_scalar;
  return a;
}

SystemMatrices assemble_system(const Mesh& mesh,
                               const std::vector<RwgEdge>& edges,
                               std::span<const Complex> chi,
                               const WaveParams& wave,
                               const AssemblyOptions& options) {
  SystemMatrices sys;
  sys.k0 = wave.k0;
  sys.chi.assign(chi.begin(), chi.end());
  sys.combined = options.combined;
  sys.gram = assemble_gram(mesh, edges, chi, wave.k0);
  const TriRule tri = triangle_rule(options.tri_points);
  const EdgeRule edge = edge_rule(options.edge_points);
  sys.z_vector = MatrixXcd::Zero(edges.size(), edges.size());
  Sink sink;
  sink.za = &sys.z_vector;
  if (options.combined) {
    sink.zphi = &sys.z_vector;
  } else {
    sys.z_scalar = MatrixXcd::Zero(edges.size(), edges.size());
    sink.zphi = &sys.z_scalar;
  }
  assemble_potentials(mesh, edges, chi, wave, tri, edge, options.threads,
                      sink, true);
  return sys;
}

void dump_matrix(const MatrixXcd& m, std::ostream& out) {
  const char magic[8] = {'V', 'I', 'E', '2', 'D', 'M', 'T', 'X'};
  out.write(magic, 8);
  std::uint64_t rows = m.rows(), cols = m.cols();
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double re = m(i, j).real(), im = m(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

MatrixXcd load_matrix(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != "VIE2DMTX")
    throw std::runtime_error("load_matrix: bad magic header");
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  MatrixXcd m(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j) {
      double re, im;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      m(i, j) = Complex(re, im);
    }
  if (!in) throw std::runtime_error("load_matrix: truncated stream");
  return m;
}

}  // namespace vie2d
