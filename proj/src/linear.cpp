#include "elastinet/linear.hpp"

#include "elastinet/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <set>

namespace elastinet {

namespace {

double comp(const Vec2& v, std::size_t c) { return c == 0 ? v.x : v.y; }

void set_comp(Vec2& v, std::size_t c, double value) { (c == 0 ? v.x : v.y) = value; }

using Triplets = std::vector<Eigen::Triplet<double>>;

} // namespace

double BoundaryResiduals::max() const { return std::max({concurrency, angle, curvature, second, third, endpoint}); }

FrozenFrame frozen_frame(const NetworkState& net, End end) {
  const std::size_t j = node_of(end, net.intervals());
  FrozenFrame f;
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec2 g1 = net.curve(i).derivative(1)[j];
    f.speed[i] = norm(g1);
    if (!(f.speed[i] >= kDefaultRegularityFloor)) throw RegularityError("frozen_frame: curve is not regular at the end");
    f.tau[i] = g1 / f.speed[i];
    f.nu[i] = rotate_left(f.tau[i]);
  }
  return f;
}

namespace {

double data_value(const BoundaryData& b, const BoundaryRowInfo& r) {
  switch (r.kind) {
    case RowKind::Concurrency: return comp(b.concurrency[r.a], r.c);
    case RowKind::Second: return comp(b.second[r.a], r.c);
    case RowKind::Angle: return comp(b.angle, r.c);
    case RowKind::Curvature: return b.curvature;
    case RowKind::Tangential: return b.tangential[r.a];
    case RowKind::Third: return comp(b.third, r.c);
    case RowKind::Endpoint: return comp(b.endpoint[r.a], r.c);
  }
  return 0.0;
}

void store_value(BoundaryData& b, const BoundaryRowInfo& r, double v) {
  switch (r.kind) {
    case RowKind::Concurrency: set_comp(b.concurrency[r.a], r.c, v); break;
    case RowKind::Second: set_comp(b.second[r.a], r.c, v); break;
    case RowKind::Angle: set_comp(b.angle, r.c, v); break;
    case RowKind::Curvature: b.curvature = v; break;
    case RowKind::Tangential: b.tangential[r.a] = v; break;
    case RowKind::Third: set_comp(b.third, r.c, v); break;
    case RowKind::Endpoint: set_comp(b.endpoint[r.a], r.c, v); break;
  }
}

std::vector<BoundaryRowInfo> row_layout(Topology topology, Flavor flavor, End end, std::size_t n) {
  const double h = 1.0 / static_cast<double>(n);
  std::vector<std::size_t> slots;
  const std::size_t first = end == End::Start ? 0 : n - 1;
  for (std::size_t j = first; j < first + 2; ++j) {
    for (std::size_t k = 0; k < LinearizedSystem::kUnknownsPerNode; ++k) slots.push_back(LinearizedSystem::kUnknownsPerNode * j + k);
  }
  std::vector<BoundaryRowInfo> rows;
  auto push = [&](RowKind kind, std::size_t a, std::size_t c, double scale) {
    rows.push_back({slots[rows.size()], end, kind, a, c, scale});
  };
  const double h2 = h * h;
  const double h3 = h2 * h;
  if (topology == Topology::Triod && end == End::Finish) {
    for (std::size_t i = 0; i < 3; ++i) for (std::size_t c = 0; c < 2; ++c) push(RowKind::Endpoint, i, c, 1.0);
    for (std::size_t i = 0; i < 3; ++i) for (std::size_t c = 0; c < 2; ++c) push(RowKind::Second, i, c, h2);
    return rows;
  }
  for (std::size_t p = 0; p < 2; ++p) for (std::size_t c = 0; c < 2; ++c) push(RowKind::Concurrency, p, c, 1.0);
  if (flavor == Flavor::C0) {
    for (std::size_t i = 0; i < 3; ++i) for (std::size_t c = 0; c < 2; ++c) push(RowKind::Second, i, c, h2);
  } else {
    for (std::size_t c = 0; c < 2; ++c) push(RowKind::Angle, 0, c, h);
    push(RowKind::Curvature, 0, 0, h2);
    for (std::size_t i = 0; i < 3; ++i) push(RowKind::Tangential, i, 0, h2);
  }
  for (std::size_t c = 0; c < 2; ++c) push(RowKind::Third, 0, c, h3);
  return rows;
}

// Unscaled coefficients of one boundary row: (column, value) pairs.
std::vector<std::pair<std::size_t, double>> row_terms(const BoundaryRowInfo& r, const FrozenFrame& f, std::size_t n) {
  const std::size_t j0 = node_of(r.end, n);
  std::vector<std::pair<std::size_t, double>> terms;
  auto derivative = [&](std::size_t curve, std::size_t component, int order, double factor) {
    if (order == 0) {
      terms.emplace_back(LinearizedSystem::index(curve, j0, component), factor);
      return;
    }
    const Stencil s = derivative_stencil(n, j0, order);
    for (std::size_t q = 0; q < s.offsets.size(); ++q) {
      const auto node = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j0) + s.offsets[q]);
      terms.emplace_back(LinearizedSystem::index(curve, node, component), factor * s.weights[q]);
    }
  };
  // −Σ⟨D_m γ^i, ν₀^i⟩ ν₀^i / |φ^i_x|^m, component r.c
  auto normal_sum = [&](int order) {
    for (std::size_t i = 0; i < 3; ++i) {
      const double w = -comp(f.nu[i], r.c) / std::pow(f.speed[i], order);
      for (std::size_t c = 0; c < 2; ++c) derivative(i, c, order, w * comp(f.nu[i], c));
    }
  };
  switch (r.kind) {
    case RowKind::Concurrency:
      derivative(0, r.c, 0, 1.0);
      derivative(r.a + 1, r.c, 0, -1.0);
      break;
    case RowKind::Second: derivative(r.a, r.c, 2, 1.0); break;
    case RowKind::Angle: normal_sum(1); break;
    case RowKind::Curvature:
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t c = 0; c < 2; ++c) derivative(i, c, 2, comp(f.nu[i], c) / (f.speed[i] * f.speed[i]));
      }
      break;
    case RowKind::Tangential:
      for (std::size_t c = 0; c < 2; ++c) derivative(r.a, c, 2, comp(f.tau[r.a], c));
      break;
    case RowKind::Third: normal_sum(3); break;
    case RowKind::Endpoint: derivative(r.a, r.c, 0, 1.0); break;
  }
  return terms;
}

Eigen::VectorXd flatten(const std::array<std::vector<Vec2>, 3>& positions) {
  const std::size_t nodes = positions[0].size();
  Eigen::VectorXd x(static_cast<Eigen::Index>(LinearizedSystem::kUnknownsPerNode * nodes));
  for (std::size_t i = 0; i < 3; ++i) {
    if (positions[i].size() != nodes) throw GridError("positions of unequal length");
    for (std::size_t j = 0; j < nodes; ++j) {
      x(static_cast<Eigen::Index>(LinearizedSystem::index(i, j, 0))) = positions[i][j].x;
      x(static_cast<Eigen::Index>(LinearizedSystem::index(i, j, 1))) = positions[i][j].y;
    }
  }
  return x;
}

std::array<std::vector<Vec2>, 3> unflatten(const Eigen::VectorXd& x) {
  const std::size_t nodes = static_cast<std::size_t>(x.size()) / LinearizedSystem::kUnknownsPerNode;
  std::array<std::vector<Vec2>, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i].resize(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      out[i][j] = {x(static_cast<Eigen::Index>(LinearizedSystem::index(i, j, 0))),
                   x(static_cast<Eigen::Index>(LinearizedSystem::index(i, j, 1)))};
    }
  }
  return out;
}

} // namespace

LinearizedSystem assemble(const NetworkState& net0, Flavor flavor, const LinearData& data,
                          std::optional<double> compatibility_tolerance) {
  if (natural_flavor(net0.topology()) != flavor) {
    throw TopologyError("assemble: flavor " + std::string(to_string(flavor)) + " does not apply to a " +
                        std::string(to_string(net0.topology())) + " network");
  }
  const std::size_t n = net0.intervals();
  for (std::size_t i = 0; i < 3; ++i) {
    if (data.f[i].size() != n + 1 || data.psi[i].size() != n + 1) throw GridError("assemble: data size mismatch");
    if (!data.third[i].empty() && data.third[i].size() != n + 1) throw GridError("assemble: data size mismatch");
  }
  if (!(data.dt > 0.0)) throw Error("assemble: dt must be positive");

  LinearizedSystem s;
  s.topology_ = net0.topology();
  s.flavor_ = flavor;
  s.intervals_ = n;
  s.endpoints_ = net0.endpoints();
  for (End e : {End::Start, End::Finish}) s.frames_[static_cast<std::size_t>(e)] = frozen_frame(net0, e);
  for (std::size_t i = 0; i < 3; ++i) {
    s.coefficient_[i].resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) s.coefficient_[i][j] = 2.0 / std::pow(net0.curve(i).speed()[j], 4);
  }

  const std::size_t size = s.unknowns();
  Triplets triplets;
  triplets.reserve(size * 6);
  for (std::size_t j = 2; j + 2 <= n; ++j) {
    const Stencil st = derivative_stencil(n, j, 4);
    const Stencil st3 = derivative_stencil(n, j, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      if (!data.third[i].empty()) {
        const auto& b = data.third[i][j];
        for (std::size_t c = 0; c < 2; ++c) {
          const std::size_t row = LinearizedSystem::index(i, j, c);
          for (std::size_t q = 0; q < st3.offsets.size(); ++q) {
            const auto node = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) + st3.offsets[q]);
            for (std::size_t d = 0; d < 2; ++d) {
              triplets.emplace_back(static_cast<int>(row), static_cast<int>(LinearizedSystem::index(i, node, d)),
                                    data.dt * st3.weights[q] * b[2 * c + d]);
            }
          }
        }
      }
      const double w = data.dt * s.coefficient_[i][j];
      for (std::size_t c = 0; c < 2; ++c) {
        const std::size_t row = LinearizedSystem::index(i, j, c);
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(row), 1.0);
        for (std::size_t q = 0; q < st.offsets.size(); ++q) {
          const auto node = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) + st.offsets[q]);
          triplets.emplace_back(static_cast<int>(row), static_cast<int>(LinearizedSystem::index(i, node, c)),
                                w * st.weights[q]);
        }
      }
    }
  }
  s.row_scale_.assign(size, 1.0);
  for (End e : {End::Start, End::Finish}) {
    const auto layout = row_layout(s.topology_, flavor, e, n);
    auto& rows = s.boundary_rows_[static_cast<std::size_t>(e)];
    for (const auto& r : layout) {
      for (const auto& [col, v] : row_terms(r, s.frame(e), n)) {
        triplets.emplace_back(static_cast<int>(r.row), static_cast<int>(col), r.scale * v);
      }
      s.row_scale_[r.row] = r.scale;
      rows.push_back(r.row);
      s.boundary_info_.push_back(r);
    }
  }
  s.matrix_.resize(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  s.matrix_.setFromTriplets(triplets.begin(), triplets.end());
  s.matrix_.makeCompressed();
  s.set_data(data);

  if (compatibility_tolerance) {
    const BoundaryResiduals r = s.boundary_residuals(data.psi);
    if (r.max() > *compatibility_tolerance) {
      throw AdmissibilityError("assemble: initial data violates the boundary conditions (residual " +
                               std::to_string(r.max()) + ")");
    }
  }
  return s;
}

void LinearizedSystem::set_data(const LinearData& data) {
  const std::size_t n = intervals_;
  dt_ = data.dt;
  data_ = data.b;
  rhs_.resize(static_cast<Eigen::Index>(unknowns()));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      const Vec2 v = data.psi[i][j] + data.dt * data.f[i][j];
      rhs_(static_cast<Eigen::Index>(index(i, j, 0))) = v.x;
      rhs_(static_cast<Eigen::Index>(index(i, j, 1))) = v.y;
    }
  }
  for (const auto& r : boundary_info_) {
    rhs_(static_cast<Eigen::Index>(r.row)) = r.scale * data_value(data_[static_cast<std::size_t>(r.end)], r);
  }
}

void LinearizedSystem::set_boundary_data(const std::array<BoundaryData, 2>& b) {
  data_ = b;
  for (const auto& r : boundary_info_) {
    rhs_(static_cast<Eigen::Index>(r.row)) = r.scale * data_value(data_[static_cast<std::size_t>(r.end)], r);
  }
}

std::array<BoundaryData, 2> LinearizedSystem::measure(const std::array<std::vector<Vec2>, 3>& positions) const {
  const Eigen::VectorXd x = flatten(positions);
  const Eigen::VectorXd ax = matrix_ * x;
  std::array<BoundaryData, 2> out{};
  for (const auto& r : boundary_info_) {
    store_value(out[static_cast<std::size_t>(r.end)], r, ax(static_cast<Eigen::Index>(r.row)) / r.scale);
  }
  return out;
}

BoundaryResiduals LinearizedSystem::boundary_residuals(const std::array<std::vector<Vec2>, 3>& positions) const {
  const Eigen::VectorXd x = flatten(positions);
  const Eigen::VectorXd ax = matrix_ * x;
  BoundaryResiduals out;
  for (const auto& r : boundary_info_) {
    const double v = std::abs(ax(static_cast<Eigen::Index>(r.row)) / r.scale -
                              data_value(data_[static_cast<std::size_t>(r.end)], r));
    double* slot = nullptr;
    switch (r.kind) {
      case RowKind::Concurrency: slot = &out.concurrency; break;
      case RowKind::Second:
      case RowKind::Tangential: slot = &out.second; break;
      case RowKind::Angle: slot = &out.angle; break;
      case RowKind::Curvature: slot = &out.curvature; break;
      case RowKind::Third: slot = &out.third; break;
      case RowKind::Endpoint: slot = &out.endpoint; break;
    }
    *slot = std::max(*slot, v);
  }
  return out;
}

double LinearizedSystem::boundary_conditioning(End e) const {
  const auto& rows = boundary_rows(e);
  std::set<Eigen::Index> cols;
  const Eigen::SparseMatrix<double, Eigen::RowMajor> rm = matrix_;
  for (std::size_t r : rows) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, static_cast<Eigen::Index>(r)); it; ++it) {
      cols.insert(it.col());
    }
  }
  const std::vector<Eigen::Index> colv(cols.begin(), cols.end());
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(colv.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < colv.size(); ++b) {
      block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rm.coeff(static_cast<Eigen::Index>(rows[a]), colv[b]);
    }
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(block).singularValues();
  return sv(sv.size() - 1) / sv(0);
}

LinearSolver::LinearSolver(const LinearizedSystem& system) : system_(&system) {
  constexpr double kBlockFloor = 1e-12;
  for (End e : {End::Start, End::Finish}) {
    const double cond = system.boundary_conditioning(e);
    if (!(cond > kBlockFloor)) {
      throw SingularSystemError(std::string("boundary rows at ") + (e == End::Start ? "x=0" : "x=1") +
                                " are rank deficient (relative smallest singular value " + std::to_string(cond) +
                                "); the junction frame fails the Lopatinskii-Shapiro condition");
    }
  }
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(system.matrix().rows());
  for (Eigen::Index k = 0; k < system.matrix().outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(system.matrix(), k); it; ++it) row_sums(it.row()) += std::abs(it.value());
  }
  norm_inf_ = row_sums.maxCoeff();
  lu_.analyzePattern(system.matrix());
  lu_.factorize(system.matrix());
  if (lu_.info() != Eigen::Success) throw SingularSystemError("sparse LU factorization failed: " + lu_.lastErrorMessage());
}

std::array<std::vector<Vec2>, 3> LinearSolver::solve(const Eigen::VectorXd& rhs,
                                                     const std::array<std::vector<Vec2>, 3>* reference) const {
  // Solving for the increment from the reference keeps the rounding error proportional
  // to the change rather than to the positions.
  const Eigen::VectorXd x0 = reference ? flatten(*reference) : Eigen::VectorXd::Zero(rhs.size());
  const Eigen::VectorXd r0 = rhs - system_->matrix() * x0;
  Eigen::VectorXd dx = lu_.solve(r0);
  if (lu_.info() != Eigen::Success || !dx.allFinite()) throw SingularSystemError("sparse LU solve failed");
  dx += lu_.solve(r0 - system_->matrix() * dx);
  const Eigen::VectorXd r = system_->matrix() * dx - r0;
  const double rel = r.lpNorm<Eigen::Infinity>() /
                     (norm_inf_ * dx.lpNorm<Eigen::Infinity>() + r0.lpNorm<Eigen::Infinity>() +
                      std::numeric_limits<double>::min());
  if (!(rel <= 1e-10)) throw SingularSystemError("linear solve residual too large: " + std::to_string(rel));
  return unflatten(x0 + dx);
}

std::array<std::vector<Vec2>, 3> solve_positions(const LinearizedSystem& system) {
  return LinearSolver(system).solve(system.rhs());
}

NetworkState solve(const LinearizedSystem& system, const NetworkState& net0) {
  return net0.with_positions(solve_positions(system));
}

std::array<BoundaryData, 2> boundary_data_of(const NetworkState& net0, Flavor flavor,
                                             const std::array<std::vector<Vec2>, 3>& positions) {
  LinearData d;
  d.dt = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    d.f[i].assign(positions[i].size(), Vec2{});
    d.psi[i] = positions[i];
  }
  return assemble(net0, flavor, d).measure(positions);
}

// Lopatinskii-Shapiro verification.

std::array<std::complex<double>, 2> SymbolRoots::decaying_pair() const {
  std::array<std::complex<double>, 2> out{};
  std::size_t k = 0;
  for (std::size_t q = 0; q < 4 && k < 2; ++q) {
    if (decaying[q]) out[k++] = roots[q];
  }
  return out;
}

SymbolRoots symbol_roots(std::complex<double> lambda, double speed) {
  if (!(lambda.real() > 0.0)) throw Error("symbol_roots: Re lambda must be positive");
  if (!(speed > 0.0)) throw Error("symbol_roots: speed must be positive");
  const std::complex<double> base = std::pow(-lambda * std::pow(speed, 4), 0.25);
  const std::complex<double> i{0.0, 1.0};
  SymbolRoots out;
  std::complex<double> rot{1.0, 0.0};
  for (std::size_t q = 0; q < 4; ++q) {
    out.roots[q] = base * rot;
    out.decaying[q] = out.roots[q].real() < 0.0;
    rot *= i;
  }
  return out;
}

Eigen::MatrixXcd ls_matrix(const LSQuery& query) {
  using C = std::complex<double>;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(12, 12);
  const FrozenFrame& f = query.frame;
  // The operator is λγ + 2γ_xxxx/|φ_x|⁴, i.e. the symbol of λ/2 with unit coefficient.
  std::array<std::array<C, 2>, 3> p;
  for (std::size_t i = 0; i < 3; ++i) p[i] = symbol_roots(query.lambda / 2.0, f.speed[i]).decaying_pair();
  auto col = [](std::size_t i, std::size_t k, std::size_t c) { return static_cast<Eigen::Index>(4 * i + 2 * k + c); };
  auto row = [](std::size_t r) { return static_cast<Eigen::Index>(r); };

  if (query.fixed_endpoint) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t c = 0; c < 2; ++c) {
          m(row(2 * i + c), col(i, k, c)) = 1.0;
          m(row(6 + 2 * i + c), col(i, k, c)) = p[i][k] * p[i][k];
        }
      }
    }
    return m;
  }

  for (std::size_t pair = 0; pair < 2; ++pair) {
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t c = 0; c < 2; ++c) {
        m(row(2 * pair + c), col(0, k, c)) += 1.0;
        m(row(2 * pair + c), col(pair + 1, k, c)) -= 1.0;
      }
    }
  }
  auto normal_sum = [&](std::size_t first_row, int order) {
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
          for (std::size_t c = 0; c < 2; ++c) {
            m(row(first_row + r), col(i, k, c)) =
                -comp(f.nu[i], r) * comp(f.nu[i], c) * std::pow(p[i][k], order) / std::pow(f.speed[i], order);
          }
        }
      }
    }
  };
  if (query.flavor == Flavor::C0) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        for (std::size_t c = 0; c < 2; ++c) m(row(4 + 2 * i + c), col(i, k, c)) = p[i][k] * p[i][k];
      }
    }
  } else {
    normal_sum(4, 1);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        const C p2 = p[i][k] * p[i][k];
        for (std::size_t c = 0; c < 2; ++c) {
          m(row(6), col(i, k, c)) = comp(f.nu[i], c) * p2 / (f.speed[i] * f.speed[i]);
          m(row(7 + i), col(i, k, c)) = comp(f.tau[i], c) * p2;
        }
      }
    }
  }
  normal_sum(10, 3);
  return m;
}

double relative_min_singular_value(const Eigen::MatrixXcd& m) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  return sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
}

std::vector<std::complex<double>> default_lambda_grid() {
  const double half_pi = std::numbers::pi / 2.0;
  const std::array<double, 3> moduli = {1e-2, 1.0, 1e2};
  const std::array<double, 5> args = {-half_pi + 0.1, -half_pi / 2.0, 0.0, half_pi / 2.0, half_pi - 0.1};
  std::vector<std::complex<double>> out;
  for (double r : moduli) {
    for (double a : args) out.push_back(std::polar(r, a));
  }
  return out;
}

LSReport ls_verify(const NetworkState& net0, Flavor flavor, const std::vector<std::complex<double>>& lambdas,
                   double threshold) {
  LSReport report;
  report.threshold = threshold;
  report.min_sigma = std::numeric_limits<double>::infinity();
  std::vector<std::pair<End, bool>> ends;
  for (End e : net0.junction_ends()) ends.emplace_back(e, false);
  if (net0.topology() == Topology::Triod) ends.emplace_back(End::Finish, true);
  for (const auto& [e, fixed] : ends) {
    LSQuery q;
    q.frame = frozen_frame(net0, e);
    q.flavor = flavor;
    q.fixed_endpoint = fixed;
    for (const auto& lambda : lambdas) {
      q.lambda = lambda;
      const double s = relative_min_singular_value(ls_matrix(q));
      report.samples.push_back({e == End::Start ? "x0" : "x1", lambda, s});
      report.min_sigma = std::min(report.min_sigma, s);
    }
  }
  report.passed = report.min_sigma > threshold;
  return report;
}

std::string LSReport::to_json() const {
  nlohmann::ordered_json j;
  j["threshold"] = threshold;
  j["min_sigma"] = min_sigma;
  j["verdict"] = passed ? "pass" : "fail";
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    arr.push_back({{"end", s.end}, {"lambda", {s.lambda.real(), s.lambda.imag()}}, {"sigma_min", s.sigma_min}});
  }
  j["samples"] = std::move(arr);
  return j.dump(2) + "\n";
}

} // namespace elastinet
