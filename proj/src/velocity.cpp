#include "elastinet/velocity.hpp"

#include "elastinet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elastinet {

Vec2 parametric_velocity(const Jet& jet, double mu) {
  const Vec2& g1 = jet.d1;
  const Vec2& g2 = jet.d2;
  const Vec2& g3 = jet.d3;
  const Vec2& g4 = jet.d4;
  const double l2 = dot(g1, g1);
  const double l4 = l2 * l2;
  const double l6 = l4 * l2;
  const double l8 = l4 * l4;
  const double p12 = dot(g2, g1);
  return 2.0 * g4 / l4 - 12.0 * g3 * (p12 / l6) - 5.0 * g2 * (dot(g2, g2) / l6) -
         8.0 * g2 * (dot(g3, g1) / l6) + 35.0 * g2 * (p12 * p12 / l8) - mu * g2 / l2;
}

std::array<double, 4> third_order_jacobian(const Jet& jet) {
  const double l2 = dot(jet.d1, jet.d1);
  const double l6 = l2 * l2 * l2;
  const double diag = -12.0 * dot(jet.d2, jet.d1) / l6;
  const double w = -8.0 / l6;
  return {diag + w * jet.d2.x * jet.d1.x, w * jet.d2.x * jet.d1.y, w * jet.d2.y * jet.d1.x,
          diag + w * jet.d2.y * jet.d1.y};
}

double normal_scalar_at(const LocalFrame& f, double mu) { return 2.0 * f.k_ss + f.k * f.k * f.k - mu * f.k; }

double tangential_scalar_at(const Jet& jet, double mu) {
  return dot(parametric_velocity(jet, mu), jet.d1) / norm(jet.d1);
}

ScalarGrid normal_scalar(const CurveSample& curve, const EnergyParams& params) {
  curve.require_regular();
  std::vector<double> a(curve.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = normal_scalar_at(local_frame(curve.jet(j)), params.mu);
  return ScalarGrid(std::move(a));
}

ScalarGrid normal_scalar_parametric(const CurveSample& curve, const EnergyParams& params) {
  curve.require_regular();
  std::vector<double> a(curve.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const Jet jet = curve.jet(j);
    a[j] = dot(parametric_velocity(jet, params.mu), rotate_left(jet.d1)) / norm(jet.d1);
  }
  return ScalarGrid(std::move(a));
}

ScalarGrid tangential_scalar(const CurveSample& curve, const EnergyParams& params) {
  curve.require_regular();
  std::vector<double> t(curve.size());
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = tangential_scalar_at(curve.jet(j), params.mu);
  return ScalarGrid(std::move(t));
}

VelocityField motion_rhs(const CurveSample& curve, const EnergyParams& params) {
  curve.require_regular();
  const std::size_t n = curve.size();
  std::vector<double> a(n), t(n);
  std::vector<Vec2> rhs(n), principal(n), remainder(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Jet jet = curve.jet(j);
    const LocalFrame f = local_frame(jet);
    a[j] = normal_scalar_at(f, params.mu);
    t[j] = tangential_scalar_at(jet, params.mu);
    rhs[j] = -a[j] * f.nu - t[j] * f.tau;
    const double l2 = f.speed * f.speed;
    principal[j] = -2.0 * jet.d4 / (l2 * l2);
    remainder[j] = rhs[j] - principal[j];
  }
  return {ScalarGrid(std::move(a)), ScalarGrid(std::move(t)), CurveGrid(std::move(rhs)),
          CurveGrid(std::move(principal)), CurveGrid(std::move(remainder))};
}

void check_perturbation(const NetworkState& net, const Perturbation& psi, double tolerance) {
  auto mismatch = [&](double x) {
    const Vec2 p0 = psi[0](x);
    return std::max(norm(p0 - psi[1](x)), norm(p0 - psi[2](x)));
  };
  if (mismatch(0.0) > tolerance) throw AdmissibilityError("perturbation does not match at the junction x=0");
  if (net.topology() == Topology::Theta) {
    if (mismatch(1.0) > tolerance) throw AdmissibilityError("perturbation does not match at the junction x=1");
  } else {
    for (const auto& p : psi) {
      if (norm(p(1.0)) > tolerance) throw AdmissibilityError("perturbation does not vanish at a fixed endpoint");
    }
  }
}

namespace {

// The oracle uses its own wide stencils and Simpson quadrature so that both sides are
// accurate well beyond the second-order discretization of the scheme.
constexpr int kOracleWidth = 11;

Vec2 wide_derivative(const std::vector<Vec2>& v, std::size_t j, int order) {
  const long n = static_cast<long>(v.size());
  const long start = std::clamp(static_cast<long>(j) - kOracleWidth / 2, 0L, n - kOracleWidth);
  std::array<int, kOracleWidth> offsets{};
  for (int q = 0; q < kOracleWidth; ++q) offsets[q] = static_cast<int>(start + q - static_cast<long>(j));
  const std::vector<double> w = stencil_weights(offsets, order);
  Vec2 acc{};
  for (int q = 0; q < kOracleWidth; ++q) acc += w[q] * v[static_cast<std::size_t>(static_cast<long>(j) + offsets[q])];
  return acc * std::pow(static_cast<double>(n - 1), order);
}

Jet wide_jet(const std::vector<Vec2>& v, std::size_t j) {
  return {wide_derivative(v, j, 1), wide_derivative(v, j, 2), wide_derivative(v, j, 3), wide_derivative(v, j, 4)};
}

double simpson(const std::vector<double>& f) {
  const std::size_t n = f.size() - 1;
  double acc = f.front() + f.back();
  for (std::size_t j = 1; j < n; ++j) acc += (j % 2 == 1 ? 4.0 : 2.0) * f[j];
  return acc / (3.0 * static_cast<double>(n));
}

double wide_energy(const std::array<std::vector<Vec2>, 3>& positions, double mu) {
  double e = 0.0;
  for (const auto& v : positions) {
    std::vector<double> density(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
      const Vec2 g1 = wide_derivative(v, j, 1);
      const Vec2 g2 = wide_derivative(v, j, 2);
      const double speed = norm(g1);
      if (!(speed >= kDefaultRegularityFloor)) throw RegularityError("first variation: curve is not regular");
      const double k = cross(g1, g2) / (speed * speed * speed);
      density[j] = (k * k + mu) * speed;
    }
    e += simpson(density);
  }
  return e;
}

} // namespace

FirstVariation first_variation_oracle(const NetworkState& net, const EnergyParams& params, const Perturbation& psi,
                                      double step) {
  check_perturbation(net, psi);
  const std::size_t n = net.intervals();
  if (n % 2 != 0) throw GridError("first variation: needs an even number of intervals");
  std::array<std::vector<Vec2>, 3> pos, dir;
  for (std::size_t i = 0; i < 3; ++i) {
    pos[i] = net.curve(i).position().data();
    dir[i].resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) dir[i][j] = psi[i](net.curve(i).position().node(j));
  }

  FirstVariation out;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> bulk(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const LocalFrame f = local_frame(wide_jet(pos[i], j));
      bulk[j] = normal_scalar_at(f, params.mu) * dot(dir[i][j], f.nu) * f.speed;
    }
    out.analytic += simpson(bulk);

    // Boundary brackets, evaluated as [·]₀¹ = value(1) − value(0).
    for (End e : {End::Start, End::Finish}) {
      const std::size_t j = node_of(e, n);
      const LocalFrame f = local_frame(wide_jet(pos[i], j));
      const Vec2 psi_s = wide_derivative(dir[i], j, 1) / f.speed;
      const double bracket = 2.0 * dot(psi_s, f.k * f.nu) +
                             dot(dir[i][j], -2.0 * f.k_s * f.nu - f.k * f.k * f.tau + params.mu * f.tau);
      out.analytic += (e == End::Finish ? bracket : -bracket);
    }
  }

  auto shifted = [&](double t) {
    auto q = pos;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j <= n; ++j) q[i][j] += t * dir[i][j];
    return wide_energy(q, params.mu);
  };
  out.numeric = (shifted(step) - shifted(-step)) / (2.0 * step);
  return out;
}

} // namespace elastinet
