#ifndef VIE2D_ASSEMBLY_HPP
#define VIE2D_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <span>
#include <vector>

#include "vie2d/em.hpp"
#include "vie2d/mesh.hpp"
#include "vie2d/quadrature.hpp"

namespace vie2d {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using SparseMatrixXcd = Eigen::SparseMatrix<Complex>;

/// Per-triangle modified contrast from region-indexed materials.
std::vector<Complex> make_contrast_table(const Mesh& mesh,
                                         std::span<const Material> materials,
                                         const WaveParams& wave);

/// Gram matrix: entries (1/(j k0)) \int f_m . f_n (1 - chi), accumulated
/// analytically triangle by triangle (each triangle updates up to nine
/// ordered RWG pairs).  Sparse: only pairs sharing a triangle interact.
SparseMatrixXcd assemble_gram(const Mesh& mesh,
                              const std::vector<RwgEdge>& edges,
                              std::span<const Complex> chi, double k0);

/// Vector-potential matrix: j k0 \iint f_m . G chi f_n.  Near and self
/// triangle pairs use the smooth/log split of the kernel with the
/// analytic log integrals; the rest is plain quadrature.
MatrixXcd assemble_vector_potential(const Mesh& mesh,
                                    const std::vector<RwgEdge>& edges,
                                    std::span<const Complex> chi, double k0,
                                    const TriRule& tri_rule, int threads = 1);

/// Scalar-potential matrix: (1/(j k0)) \int div f_m \int G div'(chi f_n).
/// The source divergence carries constant area charges plus, wherever chi
/// jumps across the shared edge, a line charge on the edge integrated
/// with the 1D rule.
MatrixXcd assemble_scalar_potential(const Mesh& mesh,
                                    const std::vector<RwgEdge>& edges,
                                    std::span<const Complex> chi, double k0,
                                    const TriRule& tri_rule,
                                    const EdgeRule& edge_rule,
                                    int threads = 1);

/// Excitation vector e_m = \int_supp(m) f_m . E_inc.
VectorXcd assemble_rhs(const Mesh& mesh, const std::vector<RwgEdge>& edges,
                       const IncidentWave& inc, const WaveParams& wave,
                       const TriRule& tri_rule);

struct AssemblyOptions {
  int tri_points = 1;      // N_G
  int edge_points = 2;     // N_l
  int threads = 1;
  bool combined = false;   // accumulate both potentials into one matrix
};

/// Assembled system (I_chi + Z_A + Z_phi) d = e.  In combined storage the
/// two dense potential matrices share one buffer (halves peak memory on
/// large meshes); z_scalar is then empty and z_vector holds their sum.
struct SystemMatrices {
  SparseMatrixXcd gram;
  MatrixXcd z_vector;
  MatrixXcd z_scalar;
  bool combined = false;
  double k0 = 0.0;
  std::vector<Complex> chi;  // per-triangle

  Eigen::Index size() const { return gram.rows(); }
  VectorXcd apply(const VectorXcd& x) const;
  VectorXcd diagonal() const;
  MatrixXcd dense_sum() const;
};

SystemMatrices assemble_system(const Mesh& mesh,
                               const std::vector<RwgEdge>& edges,
                               std::span<const Complex> chi,
                               const WaveParams& wave,
                               const AssemblyOptions& options);

// Debug dump: 8-byte magic "VIE2DMTX", two little-endian uint64 (rows,
// cols), then row-major (re, im) doubles.
void dump_matrix(const MatrixXcd& m, std::ostream& out);
MatrixXcd load_matrix(std::istream& in);

}  // namespace vie2d

#endif
