#include "elastinet/geometry.hpp"

#include "elastinet/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace elastinet {

LocalFrame local_frame(const Jet& jet, double regularity_floor) {
  const Vec2& g1 = jet.d1;
  const Vec2& g2 = jet.d2;
  const Vec2& g3 = jet.d3;
  const Vec2& g4 = jet.d4;
  const double speed = norm(g1);
  if (!(speed >= regularity_floor)) {
    std::ostringstream msg;
    msg << "curve is not regular: |gamma_x| = " << speed << " below floor " << regularity_floor;
    throw RegularityError(msg.str());
  }
  const double l2 = speed * speed;
  const double l3 = l2 * speed;
  const double l4 = l2 * l2;
  const double l5 = l4 * speed;
  const double l7 = l5 * l2;

  const double c12 = cross(g1, g2);
  const double c13 = cross(g1, g3);
  const double p12 = dot(g1, g2);

  LocalFrame f;
  f.speed = speed;
  f.tau = g1 / speed;
  f.nu = rotate_left(f.tau);
  f.k = c12 / l3;
  // Exact x-derivatives of k = (γ_x × γ_xx)/|γ_x|³ in terms of the jet.
  const double k_x = c13 / l3 - 3.0 * c12 * p12 / l5;
  const double k_xx = (cross(g2, g3) + cross(g1, g4)) / l3 - 6.0 * c13 * p12 / l5 -
                      3.0 * c12 * (dot(g2, g2) + dot(g1, g3)) / l5 + 15.0 * c12 * p12 * p12 / l7;
  f.k_s = k_x / speed;
  f.k_ss = k_xx / l2 - k_x * p12 / l4;
  return f;
}

CurveSample::CurveSample(CurveGrid position) : position_(std::move(position)) {
  if (position_.intervals() < kMinIntervals) {
    throw GridError("CurveSample: need at least " + std::to_string(kMinIntervals) + " intervals, got " +
                    std::to_string(position_.intervals()));
  }
  if (!position_.all_finite()) throw GridError("CurveSample: non-finite node coordinates");
  for (int m = 1; m <= 4; ++m) derivatives_[static_cast<std::size_t>(m - 1)] = finite_difference(position_, m);
  std::vector<double> speed(position_.size());
  for (std::size_t j = 0; j < speed.size(); ++j) speed[j] = norm(derivatives_[0][j]);
  speed_ = ScalarGrid(std::move(speed));
}

Jet CurveSample::jet(std::size_t node) const {
  return {derivatives_[0][node], derivatives_[1][node], derivatives_[2][node], derivatives_[3][node]};
}

double CurveSample::min_speed() const {
  double m = std::numeric_limits<double>::infinity();
  for (double s : speed_) m = std::min(m, s);
  return m;
}

void CurveSample::require_regular(double floor) const {
  const double m = min_speed();
  if (!(m >= floor)) {
    std::ostringstream msg;
    msg << "curve is not regular: min |gamma_x| = " << m << " below floor " << floor;
    throw RegularityError(msg.str());
  }
}

Frame frame(const CurveSample& curve, double regularity_floor) {
  curve.require_regular(regularity_floor);
  const std::size_t n = curve.size();
  std::vector<Vec2> tau(n), nu(n);
  std::vector<double> k(n), ks(n), kss(n);
  for (std::size_t j = 0; j < n; ++j) {
    const LocalFrame f = local_frame(curve.jet(j), regularity_floor);
    tau[j] = f.tau;
    nu[j] = f.nu;
    k[j] = f.k;
    ks[j] = f.k_s;
    kss[j] = f.k_ss;
  }
  return {CurveGrid(std::move(tau)), CurveGrid(std::move(nu)), ScalarGrid(std::move(k)),
          ScalarGrid(std::move(ks)), ScalarGrid(std::move(kss))};
}

double elastic_energy(const CurveSample& curve, const EnergyParams& params, double regularity_floor) {
  curve.require_regular(regularity_floor);
  std::vector<double> density(curve.size());
  for (std::size_t j = 0; j < density.size(); ++j) {
    const Jet jet = curve.jet(j);
    const double speed = norm(jet.d1);
    const double k = cross(jet.d1, jet.d2) / (speed * speed * speed);
    density[j] = (k * k + params.mu) * speed;
  }
  return trapezoid(density);
}

double length(const CurveSample& curve) { return trapezoid(curve.speed().values()); }

double holder_seminorm(const SampledField& field, double rho, HolderDirection direction) {
  if (!(rho > 0.0 && rho < 1.0)) throw GridError("holder_seminorm: rho must lie in (0,1)");
  const auto& u = field.slices;
  if (u.empty()) throw GridError("holder_seminorm: no samples");
  const std::size_t nodes = u.front().size();
  for (const auto& row : u) {
    if (row.size() != nodes) throw GridError("holder_seminorm: ragged slices");
  }
  double sup = 0.0;
  if (direction == HolderDirection::Time) {
    if (u.size() < 2 || field.times.size() != u.size()) {
      throw GridError("holder_seminorm: need at least two time slices with matching times");
    }
    for (std::size_t a = 0; a < u.size(); ++a) {
      for (std::size_t b = a + 1; b < u.size(); ++b) {
        const double dt = std::abs(field.times[a] - field.times[b]);
        if (dt == 0.0) throw GridError("holder_seminorm: repeated time slice");
        const double denom = std::pow(dt, rho);
        for (std::size_t j = 0; j < nodes; ++j) sup = std::max(sup, std::abs(u[a][j] - u[b][j]) / denom);
      }
    }
  } else {
    if (nodes < 2) throw GridError("holder_seminorm: need at least two nodes");
    const double h = 1.0 / static_cast<double>(nodes - 1);
    for (const auto& row : u) {
      for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = i + 1; j < nodes; ++j) {
          const double denom = std::pow(static_cast<double>(j - i) * h, rho);
          sup = std::max(sup, std::abs(row[i] - row[j]) / denom);
        }
      }
    }
  }
  return sup;
}

} // namespace elastinet
