#pragma once

#include "elastinet/network.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace elastinet {

/// Right-hand sides of the boundary rows at one end. Only the members used by the
/// flavor (and end) are read.
struct BoundaryData {
  std::array<Vec2, 2> concurrency{}; // γ¹−γ², γ¹−γ³
  std::array<Vec2, 3> second{};      // γ^i_xx (C0 junctions, Triod x=1)
  Vec2 angle{};                      // −Σ⟨γ_x,ν₀⟩ν₀/|φ_x|
  double curvature = 0.0;            // Σ⟨γ_xx,ν₀⟩/|φ_x|²
  std::array<double, 3> tangential{}; // ⟨γ^i_xx,τ₀^i⟩
  Vec2 third{};                      // −Σ⟨γ_xxx,ν₀⟩ν₀/|φ_x|³
  std::array<Vec2, 3> endpoint{};    // γ^i(1) (Triod x=1)
};

/// Data (f, b, ψ) of one implicit Euler step: (γ − ψ)/dt + c γ_xxxx + B γ_xxx = f in the bulk.
struct LinearData {
  double dt = 0.0;
  std::array<std::vector<Vec2>, 3> f;
  std::array<BoundaryData, 2> b; // [End]
  std::array<std::vector<Vec2>, 3> psi;
  /// Per-node 2×2 matrices B (row-major); empty vectors drop the third-order term.
  std::array<std::vector<std::array<double, 4>>, 3> third;
};

/// Residual groups of the boundary rows.
struct BoundaryResiduals {
  double concurrency = 0.0;
  double angle = 0.0;
  double curvature = 0.0;
  double second = 0.0;
  double third = 0.0;
  double endpoint = 0.0;

  double max() const;
};

/// Linear conditions frozen at the frame of the reference network φ.
struct FrozenFrame {
  std::array<Vec2, 3> tau;
  std::array<Vec2, 3> nu;
  std::array<double, 3> speed;
};

FrozenFrame frozen_frame(const NetworkState& net, End end);

/// Kind of a boundary row; `a` names the pair or curve and `c` the component.
enum class RowKind { Concurrency, Second, Angle, Curvature, Tangential, Third, Endpoint };

struct BoundaryRowInfo {
  std::size_t row;
  End end;
  RowKind kind;
  std::size_t a;
  std::size_t c;
  double scale; // rows of derivative order m are multiplied by h^m
};

class LinearizedSystem {
public:
  static constexpr std::size_t kUnknownsPerNode = 6;
  static constexpr std::size_t kBoundaryRowsPerEnd = 12;

  Topology topology() const { return topology_; }
  Flavor flavor() const { return flavor_; }
  std::size_t intervals() const { return intervals_; }
  std::size_t unknowns() const { return kUnknownsPerNode * (intervals_ + 1); }
  /// Index of component c of curve i at node j.
  static std::size_t index(std::size_t curve, std::size_t node, std::size_t component) {
    return kUnknownsPerNode * node + 2 * curve + component;
  }

  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }
  /// Boundary rows of one end (12 each), in assembly order.
  const std::vector<std::size_t>& boundary_rows(End e) const { return boundary_rows_[static_cast<std::size_t>(e)]; }
  /// Implicit coefficient c^i_j = 2/|φ^i_x(x_j)|⁴.
  const std::array<std::vector<double>, 3>& coefficient() const { return coefficient_; }
  const FrozenFrame& frame(End e) const { return frames_[static_cast<std::size_t>(e)]; }

  double dt() const { return dt_; }

  /// Replaces f, b and ψ; the matrix (which depends only on net0 and dt) is kept.
  void set_data(const LinearData& data);
  void set_boundary_data(const std::array<BoundaryData, 2>& b);
  /// Values of the boundary-row functionals at the given positions.
  std::array<BoundaryData, 2> measure(const std::array<std::vector<Vec2>, 3>& positions) const;

  /// Residuals of the (unscaled) boundary rows at the given positions.
  BoundaryResiduals boundary_residuals(const std::array<std::vector<Vec2>, 3>& positions) const;
  /// Ratio σ_min/σ_max of the 12 boundary rows of one end restricted to the nodes they touch.
  double boundary_conditioning(End e) const;

  friend LinearizedSystem assemble(const NetworkState&, Flavor, const LinearData&, std::optional<double>);

private:
  Topology topology_ = Topology::Theta;
  Flavor flavor_ = Flavor::C0;
  std::size_t intervals_ = 0;
  double dt_ = 0.0;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::VectorXd rhs_;
  std::vector<double> row_scale_;
  std::array<std::vector<std::size_t>, 2> boundary_rows_;
  std::array<std::vector<double>, 3> coefficient_;
  std::array<FrozenFrame, 2> frames_;
  std::array<BoundaryData, 2> data_;
  std::vector<BoundaryRowInfo> boundary_info_;
  std::optional<std::array<Vec2, 3>> endpoints_;
};

/// Builds the implicit Euler system linearized at net0. When `compatibility_tolerance`
/// is set, ψ must satisfy the boundary rows to that tolerance (AdmissibilityError otherwise).
/// Throws TopologyError for a flavor that does not fit the topology.
LinearizedSystem assemble(const NetworkState& net0, Flavor flavor, const LinearData& data,
                          std::optional<double> compatibility_tolerance = std::nullopt);

/// Factorization of a system's matrix, reusable for several right-hand sides.
class LinearSolver {
public:
  /// Throws SingularSystemError when a boundary block is rank deficient or LU fails.
  explicit LinearSolver(const LinearizedSystem& system);
  /// Solves for the increment from `reference` when given. Throws SingularSystemError
  /// when the relative residual exceeds 1e-10.
  std::array<std::vector<Vec2>, 3> solve(const Eigen::VectorXd& rhs,
                                         const std::array<std::vector<Vec2>, 3>* reference = nullptr) const;

private:
  const LinearizedSystem* system_;
  double norm_inf_ = 0.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// Sparse LU solve. Throws SingularSystemError when the factorization fails, when a
/// boundary block is rank deficient, or when the relative residual exceeds 1e-10.
std::array<std::vector<Vec2>, 3> solve_positions(const LinearizedSystem& system);
NetworkState solve(const LinearizedSystem& system, const NetworkState& net0);

/// Boundary data satisfied exactly by the given positions (used to build consistent
/// data and in tests).
std::array<BoundaryData, 2> boundary_data_of(const NetworkState& net0, Flavor flavor,
                                             const std::array<std::vector<Vec2>, 3>& positions);

// Lopatinskii-Shapiro verification.

struct SymbolRoots {
  std::array<std::complex<double>, 4> roots;
  std::array<bool, 4> decaying{};
  /// The two roots with negative real part.
  std::array<std::complex<double>, 2> decaying_pair() const;
};

/// Roots p of p⁴ = −λ·speed⁴; the decaying ones have Re p < 0. Throws Error when
/// Re λ ≤ 0 or speed ≤ 0.
SymbolRoots symbol_roots(std::complex<double> lambda, double speed);

struct LSQuery {
  std::complex<double> lambda{1.0, 0.0};
  FrozenFrame frame;
  Flavor flavor = Flavor::C0;
  /// Triod x=1 uses the fixed-endpoint and second-order conditions.
  bool fixed_endpoint = false;
};

/// 12×12 boundary matrix on the decaying modes of λγ + 2γ_xxxx/|φ_x|⁴ = 0.
Eigen::MatrixXcd ls_matrix(const LSQuery& query);

/// σ_min/σ_max of a matrix.
double relative_min_singular_value(const Eigen::MatrixXcd& m);

struct LSSample {
  std::string end; // "x0" or "x1"
  std::complex<double> lambda;
  double sigma_min = 0.0; // relative to σ_max
};

struct LSReport {
  std::vector<LSSample> samples;
  double threshold = 1e-6;
  double min_sigma = 0.0;
  bool passed = false;

  std::string to_json() const;
};

std::vector<std::complex<double>> default_lambda_grid();

LSReport ls_verify(const NetworkState& net0, Flavor flavor,
                   const std::vector<std::complex<double>>& lambdas = default_lambda_grid(), double threshold = 1e-6);

} // namespace elastinet
