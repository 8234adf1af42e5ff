#include "elastinet/network.hpp"

#include "elastinet/errors.hpp"
#include "elastinet/velocity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace elastinet {

std::string_view to_string(Topology t) { return t == Topology::Theta ? "theta" : "triod"; }
std::string_view to_string(Flavor f) { return f == Flavor::C0 ? "c0" : "c1"; }

Topology parse_topology(std::string_view s) {
  if (s == "theta") return Topology::Theta;
  if (s == "triod") return Topology::Triod;
  throw FormatError("unknown topology '" + std::string(s) + "' (expected theta or triod)");
}

Flavor parse_flavor(std::string_view s) {
  if (s == "c0" || s == "C0") return Flavor::C0;
  if (s == "c1" || s == "C1") return Flavor::C1;
  throw FormatError("unknown flavor '" + std::string(s) + "' (expected c0 or c1)");
}

Flavor natural_flavor(Topology t) { return t == Topology::Theta ? Flavor::C0 : Flavor::C1; }

Vec2 RigidMotion::apply_linear(const Vec2& v) const {
  const Vec2 r = reflect ? Vec2{v.x, -v.y} : v;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * r.x - s * r.y, s * r.x + c * r.y};
}

Vec2 RigidMotion::apply(const Vec2& p) const { return apply_linear(p) + translation; }

NetworkState::NetworkState(Topology topology, std::array<CurveSample, 3> curves,
                           std::optional<std::array<Vec2, 3>> endpoints)
    : topology_(topology), curves_(std::move(curves)), endpoints_(std::move(endpoints)) {
  const std::size_t n = curves_[0].intervals();
  for (const auto& c : curves_) {
    if (c.intervals() != n) throw GridError("NetworkState: curves must share one grid");
  }
  if (topology_ == Topology::Theta) {
    endpoints_.reset();
  } else if (!endpoints_) {
    endpoints_ = std::array<Vec2, 3>{curves_[0].position().back(), curves_[1].position().back(),
                                     curves_[2].position().back()};
  }
}

NetworkState NetworkState::from_positions(Topology topology, const std::array<std::vector<Vec2>, 3>& positions,
                                          std::optional<std::array<Vec2, 3>> endpoints) {
  return NetworkState(topology,
                      {CurveSample(positions[0]), CurveSample(positions[1]), CurveSample(positions[2])},
                      std::move(endpoints));
}

double NetworkState::min_speed() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : curves_) m = std::min(m, c.min_speed());
  return m;
}

NetworkState NetworkState::transformed(const RigidMotion& motion) const {
  std::array<std::vector<Vec2>, 3> pos;
  for (std::size_t i = 0; i < 3; ++i) {
    for (const auto& p : curves_[i].position()) pos[i].push_back(motion.apply(p));
  }
  std::optional<std::array<Vec2, 3>> ends;
  if (endpoints_) {
    ends = std::array<Vec2, 3>{};
    for (std::size_t i = 0; i < 3; ++i) (*ends)[i] = motion.apply((*endpoints_)[i]);
  }
  return from_positions(topology_, pos, ends);
}

NetworkState NetworkState::with_positions(const std::array<std::vector<Vec2>, 3>& positions) const {
  return from_positions(topology_, positions, endpoints_);
}

std::vector<End> NetworkState::junction_ends() const {
  if (topology_ == Topology::Theta) return {End::Start, End::Finish};
  return {End::Start};
}

double network_energy(const NetworkState& net, const EnergyParams& params, double regularity_floor) {
  double e = 0.0;
  for (const auto& c : net.curves()) e += elastic_energy(c, params, regularity_floor);
  return e;
}

double network_length(const NetworkState& net) {
  double l = 0.0;
  for (const auto& c : net.curves()) l += length(c);
  return l;
}

namespace {

std::string prefix(End e) { return e == End::Start ? "x0." : "x1."; }

std::array<LocalFrame, 3> frames_at(const NetworkState& net, End e) {
  const std::size_t j = node_of(e, net.intervals());
  return {local_frame(net.curve(0).jet(j)), local_frame(net.curve(1).jet(j)), local_frame(net.curve(2).jet(j))};
}

double angle_between(const Vec2& a, const Vec2& b) { return std::atan2(std::abs(cross(a, b)), dot(a, b)); }

double concurrency_at(const NetworkState& net, End e) {
  const std::size_t j = node_of(e, net.intervals());
  const Vec2 p0 = net.curve(0).position()[j];
  const Vec2 p1 = net.curve(1).position()[j];
  const Vec2 p2 = net.curve(2).position()[j];
  return std::max({norm(p0 - p1), norm(p0 - p2), norm(p1 - p2)});
}

Vec2 third_order_c0(const std::array<LocalFrame, 3>& f, double mu) {
  Vec2 s{};
  for (const auto& fi : f) s += 2.0 * fi.k_s * fi.nu - mu * fi.tau;
  return s;
}

Vec2 third_order_c1(const std::array<LocalFrame, 3>& f) {
  Vec2 s{};
  for (const auto& fi : f) s += 2.0 * fi.k_s * fi.nu - fi.k * fi.k * fi.tau;
  return s;
}

void require_topology(const NetworkState& net, Topology t, const char* what) {
  if (net.topology() != t) {
    throw TopologyError(std::string(what) + ": requires a " + std::string(to_string(t)) + " network, got " +
                        std::string(to_string(net.topology())));
  }
}

void require_pairing(const NetworkState& net, Flavor flavor, const char* what) {
  if (natural_flavor(net.topology()) != flavor) {
    throw TopologyError(std::string(what) + ": flavor " + std::string(to_string(flavor)) +
                        " does not apply to a " + std::string(to_string(net.topology())) + " network");
  }
}

// Tolerance for a residual built from derivatives up to `order`: never below the
// rounding floor of that derivative.
auto tolerance_by_order(const NetworkState& net, double tolerance) {
  std::array<double, 10> t{};
  const bool regular = net.min_speed() >= kDefaultRegularityFloor;
  for (int m = 0; m <= 4; ++m) {
    const auto k = static_cast<std::size_t>(m);
    t[k] = std::max(tolerance, regular ? rounding_floor(net, m, true) : 0.0);
    t[k + 5] = std::max(tolerance, regular ? rounding_floor(net, m, false) : 0.0);
  }
  // Orders 0..4 for geometric quantities, 5..9 for raw parametric derivatives.
  return [t](int m) { return t[static_cast<std::size_t>(m)]; };
}

void add_regularity(AdmissibilityReport& r, const NetworkState& net) {
  r.add("regularity", net.min_speed(), Bound::Lower, kDefaultRegularityFloor);
}

} // namespace

JunctionAngles junction_angles(const NetworkState& net, End end) {
  const auto f = frames_at(net, end);
  return {angle_between(f[1].tau, f[2].tau), angle_between(f[2].tau, f[0].tau), angle_between(f[0].tau, f[1].tau)};
}

bool ResidualEntry::passed() const {
  if (!std::isfinite(value)) return false;
  return bound == Bound::Upper ? value <= tolerance : value > tolerance;
}

void AdmissibilityReport::add(std::string name, double value, Bound bound) {
  add(std::move(name), value, bound, tolerance_);
}

void AdmissibilityReport::add(std::string name, double value, Bound bound, double tolerance) {
  entries_.push_back({std::move(name), value, tolerance, bound});
}

void AdmissibilityReport::merge(const AdmissibilityReport& other) {
  for (const auto& e : other.entries_) {
    if (!contains(e.name)) entries_.push_back(e);
  }
}

bool AdmissibilityReport::passed() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.passed(); });
}

bool AdmissibilityReport::contains(std::string_view name) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.name == name; });
}

const ResidualEntry& AdmissibilityReport::entry(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no residual named '" + std::string(name) + "'");
}

double AdmissibilityReport::value(std::string_view name) const { return entry(name).value; }

std::vector<std::string> AdmissibilityReport::failures() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (!e.passed()) out.push_back(e.name);
  }
  return out;
}

double AdmissibilityReport::max_with_suffix(std::string_view suffix) const {
  double m = 0.0;
  for (const auto& e : entries_) {
    if (e.bound == Bound::Upper && e.name.ends_with(suffix)) m = std::max(m, e.value);
  }
  return m;
}

std::string AdmissibilityReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific;
  for (const auto& e : entries_) {
    os << (e.passed() ? "  ok    " : "  FAIL  ") << std::left << std::setw(26) << e.name << std::right << e.value
       << (e.bound == Bound::Upper ? " <= " : " > ") << e.tolerance << '\n';
  }
  os << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

AdmissibilityReport junction_residuals_c0(const NetworkState& net, const EnergyParams& params, double tolerance) {
  const auto tol = tolerance_by_order(net, tolerance);
  require_topology(net, Topology::Theta, "junction_residuals_c0");
  AdmissibilityReport r(tolerance);
  for (End e : {End::Start, End::Finish}) {
    const std::size_t j = node_of(e, net.intervals());
    const auto f = frames_at(net, e);
    double curvature = 0.0, second = 0.0, tangential = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const Vec2 g2 = net.curve(i).derivative(2)[j];
      curvature = std::max(curvature, std::abs(f[i].k));
      second = std::max(second, norm(g2));
      tangential = std::max(tangential, std::abs(dot(g2, f[i].tau)));
    }
    const std::string p = prefix(e);
    r.add(p + "concurrency", concurrency_at(net, e), Bound::Upper, tol(0));
    r.add(p + "curvature", curvature, Bound::Upper, tol(2));
    r.add(p + "second", second, Bound::Upper, tol(7));
    r.add(p + "tangential_second", tangential, Bound::Upper, tol(7));
    r.add(p + "third", norm(third_order_c0(f, params.mu)), Bound::Upper, tol(3));
  }
  return r;
}

AdmissibilityReport junction_residuals_c1(const NetworkState& net, const EnergyParams& /*params*/,
                                          double tolerance) {
  const auto tol = tolerance_by_order(net, tolerance);
  require_topology(net, Topology::Triod, "junction_residuals_c1");
  AdmissibilityReport r(tolerance);
  const auto f = frames_at(net, End::Start);
  Vec2 tau_sum{};
  double k_sum = 0.0, tangential = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    tau_sum += f[i].tau;
    k_sum += f[i].k;
    tangential = std::max(tangential, std::abs(dot(net.curve(i).derivative(2)[0], f[i].tau)));
  }
  r.add("x0.concurrency", concurrency_at(net, End::Start), Bound::Upper, tol(0));
  r.add("x0.angle", norm(tau_sum), Bound::Upper, tol(1));
  r.add("x0.curvature_sum", std::abs(k_sum), Bound::Upper, tol(2));
  r.add("x0.tangential_second", tangential, Bound::Upper, tol(7));
  r.add("x0.third", norm(third_order_c1(f)), Bound::Upper, tol(3));

  const std::size_t n = net.intervals();
  double endpoint = 0.0, second = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    endpoint = std::max(endpoint, norm(net.curve(i).position()[n] - (*net.endpoints())[i]));
    second = std::max(second, norm(net.curve(i).derivative(2)[n]));
  }
  r.add("x1.endpoint", endpoint, Bound::Upper, tol(0));
  r.add("x1.second", second, Bound::Upper, tol(7));
  return r;
}

double normal_span_measure(const NetworkState& net, End end) {
  const std::size_t j = node_of(end, net.intervals());
  Eigen::Matrix<double, 2, 3> m;
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec2 nu = rotate_left(net.curve(i).derivative(1)[j]);
    const double l = norm(nu);
    m(0, static_cast<Eigen::Index>(i)) = nu.x / l;
    m(1, static_cast<Eigen::Index>(i)) = nu.y / l;
  }
  // Smallest singular value from the 2x2 Gram matrix.
  const Eigen::Matrix2d gram = m * m.transpose();
  const double tr = gram.trace();
  const double det = gram.determinant();
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double lo = std::max(0.0, 0.5 * tr - disc);
  // Recover the small eigenvalue stably as det / large when possible.
  const double hi = 0.5 * tr + disc;
  const double small = hi > 0.0 ? std::max(0.0, det) / hi : lo;
  return std::sqrt(small);
}

AdmissibilityReport geometric_admissibility(const NetworkState& net, const EnergyParams& params, Flavor flavor,
                                            double tolerance) {
  const auto tol = tolerance_by_order(net, tolerance);
  require_pairing(net, flavor, "geometric_admissibility");
  AdmissibilityReport r(tolerance);
  add_regularity(r, net);
  if (!(net.min_speed() >= kDefaultRegularityFloor)) return r;

  if (flavor == Flavor::C0) {
    for (End e : {End::Start, End::Finish}) {
      const auto f = frames_at(net, e);
      const JunctionAngles a = junction_angles(net, e);
      const std::array<double, 3> s = {std::sin(a.alpha1), std::sin(a.alpha2), std::sin(a.alpha3)};
      double curvature = 0.0, balance = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        curvature = std::max(curvature, std::abs(f[i].k));
        balance += s[i] * normal_scalar_at(f[i], params.mu);
      }
      const std::string p = prefix(e);
      r.add(p + "concurrency", concurrency_at(net, e), Bound::Upper, tol(0));
      r.add(p + "span", normal_span_measure(net, e), Bound::Lower);
      r.add(p + "curvature", curvature, Bound::Upper, tol(2));
      r.add(p + "third", norm(third_order_c0(f, params.mu)), Bound::Upper, tol(3));
      r.add(p + "sine_balance", std::abs(balance), Bound::Upper, tol(4));
    }
    return r;
  }

  const auto f = frames_at(net, End::Start);
  Vec2 tau_sum{};
  double k_sum = 0.0, a_sum = 0.0;
  for (const auto& fi : f) {
    tau_sum += fi.tau;
    k_sum += fi.k;
    a_sum += normal_scalar_at(fi, params.mu);
  }
  r.add("x0.concurrency", concurrency_at(net, End::Start), Bound::Upper, tol(0));
  r.add("x0.angle", norm(tau_sum), Bound::Upper, tol(1));
  r.add("x0.curvature_sum", std::abs(k_sum), Bound::Upper, tol(2));
  r.add("x0.third", norm(third_order_c1(f)), Bound::Upper, tol(3));
  r.add("x0.a_sum", std::abs(a_sum), Bound::Upper, tol(4));
  const auto f1 = frames_at(net, End::Finish);
  const std::size_t n = net.intervals();
  double curvature = 0.0, endpoint = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    curvature = std::max(curvature, std::abs(f1[i].k));
    endpoint = std::max(endpoint, norm(net.curve(i).position()[n] - (*net.endpoints())[i]));
  }
  r.add("x1.curvature", curvature, Bound::Upper, tol(2));
  r.add("x1.endpoint", endpoint, Bound::Upper, tol(0));
  return r;
}

namespace {

double compatibility_at(const NetworkState& net, const EnergyParams& params, End e) {
  const std::size_t j = node_of(e, net.intervals());
  std::array<Vec2, 3> w;
  for (std::size_t i = 0; i < 3; ++i) {
    const Jet jet = net.curve(i).jet(j);
    const LocalFrame f = local_frame(jet);
    w[i] = normal_scalar_at(f, params.mu) * f.nu + tangential_scalar_at(jet, params.mu) * f.tau;
  }
  return std::max({norm(w[0] - w[1]), norm(w[0] - w[2]), norm(w[1] - w[2])});
}

} // namespace

double compatibility_residual(const NetworkState& net, const EnergyParams& params) {
  double m = 0.0;
  for (End e : net.junction_ends()) m = std::max(m, compatibility_at(net, params, e));
  return m;
}

double rounding_floor(const NetworkState& net, int order, bool geometric) {
  const std::size_t n = net.intervals();
  double scale = 1.0;
  double speed = std::numeric_limits<double>::infinity();
  for (const auto& c : net.curves()) {
    scale = std::max(scale, max_norm(c.position()));
    for (End e : net.junction_ends()) speed = std::min(speed, c.speed()[node_of(e, n)]);
  }
  double weights = 1.0;
  if (order > 0) {
    weights = 0.0;
    for (double w : derivative_stencil(n, 0, order).weights) weights += std::abs(w);
  }
  // Sums of three curves, pair differences and a safety factor of two.
  constexpr double kSafety = 16.0;
  const double floor = kSafety * std::numeric_limits<double>::epsilon() * scale * weights;
  return geometric ? floor / std::pow(speed, order) : floor;
}

double compatibility_rounding_floor(const NetworkState& net) { return rounding_floor(net, 4); }

AdmissibilityReport parametric_admissibility(const NetworkState& net, const EnergyParams& params, Flavor flavor,
                                             double tolerance) {
  AdmissibilityReport r(tolerance);
  if (natural_flavor(net.topology()) != flavor) {
    r.add("topology", 1.0, Bound::Upper, 0.0);
    return r;
  }
  add_regularity(r, net);
  if (!(net.min_speed() >= kDefaultRegularityFloor)) return r;

  if (flavor == Flavor::C0) {
    for (End e : {End::Start, End::Finish}) r.add(prefix(e) + "span", normal_span_measure(net, e), Bound::Lower);
    r.merge(junction_residuals_c0(net, params, tolerance));
  } else {
    r.merge(junction_residuals_c1(net, params, tolerance));
  }
  const double floor = compatibility_rounding_floor(net);
  for (End e : net.junction_ends()) {
    r.add(prefix(e) + "compatibility", compatibility_at(net, params, e), Bound::Upper, std::max(tolerance, floor));
  }
  return r;
}

double ReparamMap::min_derivative() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& t : theta) {
    for (std::size_t j = 0; j + 1 < t.size(); ++j) m = std::min(m, (t[j + 1] - t[j]) / t.spacing());
  }
  return m;
}

Vec2 interpolate(const CurveGrid& samples, double u, int degree) {
  const std::size_t n = samples.intervals();
  const auto deg = static_cast<std::size_t>(std::max(1, degree));
  if (n < deg) throw GridError("interpolate: too few samples for the requested degree");
  const double pos = std::clamp(u, 0.0, 1.0) * static_cast<double>(n);
  const auto centre = static_cast<std::ptrdiff_t>(std::floor(pos)) - static_cast<std::ptrdiff_t>((deg - 1) / 2);
  const auto start = static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(centre, 0, static_cast<std::ptrdiff_t>(n - deg)));
  Vec2 out{};
  for (std::size_t k = start; k <= start + deg; ++k) {
    double w = 1.0;
    for (std::size_t m = start; m <= start + deg; ++m) {
      if (m != k) w *= (pos - static_cast<double>(m)) / (static_cast<double>(k) - static_cast<double>(m));
    }
    out += w * samples[k];
  }
  return out;
}

std::vector<Vec2> densify(const CurveGrid& samples, std::size_t factor) {
  const std::size_t m = std::max<std::size_t>(1, factor) * samples.intervals();
  std::vector<Vec2> out(m + 1);
  for (std::size_t q = 0; q <= m; ++q) out[q] = interpolate(samples, static_cast<double>(q) / static_cast<double>(m));
  return out;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return norm(p - (a + t * d));
}

double directed_hausdorff(std::span<const Vec2> from, std::span<const Vec2> to) {
  double worst = 0.0;
  for (const Vec2& p : from) {
    double best = std::numeric_limits<double>::infinity();
    if (to.size() == 1) best = norm(p - to[0]);
    for (std::size_t j = 0; j + 1 < to.size(); ++j) best = std::min(best, point_segment_distance(p, to[j], to[j + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

// θ near each end: P(d) = value + d + a2 d²/2 + d³/6 + a4 d⁴/24 with d the offset from
// the end, blended into the identity by a quintic smoothstep over `radius`.
struct ThetaShape {
  std::array<double, 2> a2{};
  std::array<double, 2> a4{};
  double radius = 0.25;

  static double poly(double d, double a2, double a4) { return d + a2 * d * d / 2 + d * d * d / 6 + a4 * d * d * d * d / 24; }
  static double poly_prime(double d, double a2, double a4) { return 1 + a2 * d + d * d / 2 + a4 * d * d * d / 6; }
  static double step(double t) { return t * t * t * (10 - 15 * t + 6 * t * t); }
  static double step_prime(double t) { return 30 * t * t * (1 - t) * (1 - t); }

  double value(double x) const {
    double th = x;
    if (x < radius) {
      const double w = 1 - step(x / radius);
      th += w * (poly(x, a2[0], a4[0]) - x);
    }
    if (1 - x < radius) {
      const double w = 1 - step((1 - x) / radius);
      th += w * (1 + poly(x - 1, a2[1], a4[1]) - x);
    }
    return th;
  }

  double derivative(double x) const {
    double dth = 1.0;
    if (x < radius) {
      const double t = x / radius;
      dth += -step_prime(t) / radius * (poly(x, a2[0], a4[0]) - x) +
             (1 - step(t)) * (poly_prime(x, a2[0], a4[0]) - 1);
    }
    if (1 - x < radius) {
      const double t = (1 - x) / radius;
      dth += step_prime(t) / radius * (1 + poly(x - 1, a2[1], a4[1]) - x) +
             (1 - step(t)) * (poly_prime(x - 1, a2[1], a4[1]) - 1);
    }
    return dth;
  }
};

constexpr std::size_t kWindow = 6;

// Jet of σ∘θ at an end node, using only the samples a one-sided stencil touches.
Jet composed_jet(const CurveGrid& sigma, const ThetaShape& shape, End e) {
  const std::size_t n = sigma.intervals();
  std::vector<Vec2> phi(n + 1);
  for (std::size_t q = 0; q < kWindow; ++q) {
    const std::size_t j = e == End::Start ? q : n - q;
    phi[j] = interpolate(sigma, shape.value(sigma.node(j)));
  }
  const std::size_t j = node_of(e, n);
  return {finite_difference_at(phi, j, 1), finite_difference_at(phi, j, 2), finite_difference_at(phi, j, 3),
          finite_difference_at(phi, j, 4)};
}

struct EndResidual {
  double second = 0.0;
  double tangential = 0.0;
};

EndResidual end_residual(const CurveGrid& sigma, const ThetaShape& shape, End e, double mu,
                         std::optional<double> target) {
  const Jet jet = composed_jet(sigma, shape, e);
  const double l = norm(jet.d1);
  EndResidual r;
  r.second = dot(jet.d2, jet.d1) / (l * l);
  if (target) r.tangential = tangential_scalar_at(jet, mu) - *target;
  return r;
}

// Newton on (a2, a4) at one end; a4 is left untouched when no tangential target applies.
void polish_end(const CurveGrid& sigma, ThetaShape& shape, End e, double mu, std::optional<double> target) {
  const auto k = static_cast<std::size_t>(e);
  constexpr int kMaxIterations = 30;
  constexpr double kStep = 1e-4;
  for (int it = 0; it < kMaxIterations; ++it) {
    const EndResidual f = end_residual(sigma, shape, e, mu, target);
    ThetaShape s2 = shape;
    s2.a2[k] += kStep;
    const EndResidual f2 = end_residual(sigma, s2, e, mu, target);
    double d2 = 0.0, d4 = 0.0;
    if (target) {
      ThetaShape s4 = shape;
      s4.a4[k] += kStep;
      const EndResidual f4 = end_residual(sigma, s4, e, mu, target);
      Eigen::Matrix2d jac;
      jac << (f2.second - f.second) / kStep, (f4.second - f.second) / kStep,
          (f2.tangential - f.tangential) / kStep, (f4.tangential - f.tangential) / kStep;
      const Eigen::Vector2d delta = jac.fullPivLu().solve(Eigen::Vector2d(-f.second, -f.tangential));
      d2 = delta(0);
      d4 = delta(1);
    } else {
      d2 = -f.second / ((f2.second - f.second) / kStep);
    }
    if (!std::isfinite(d2) || !std::isfinite(d4)) throw AdmissibilityError("reparametrization: Newton step failed");
    shape.a2[k] += d2;
    shape.a4[k] += d4;
    if (std::abs(d2) <= 1e-13 * (1 + std::abs(shape.a2[k])) && std::abs(d4) <= 1e-10 * (1 + std::abs(shape.a4[k]))) {
      break;
    }
  }
}

// Tangential speeds T^i that make A^iν^i + T^iτ^i agree, by least squares over (W, T¹, T², T³).
std::array<double, 3> tangential_targets(const std::array<Jet, 3>& jets, double mu) {
  Eigen::Matrix<double, 6, 5> m = Eigen::Matrix<double, 6, 5>::Zero();
  Eigen::Matrix<double, 6, 1> rhs;
  for (Eigen::Index i = 0; i < 3; ++i) {
    const LocalFrame f = local_frame(jets[static_cast<std::size_t>(i)]);
    const Vec2 an = normal_scalar_at(f, mu) * f.nu;
    m(2 * i, 0) = 1;
    m(2 * i + 1, 1) = 1;
    m(2 * i, 2 + i) = -f.tau.x;
    m(2 * i + 1, 2 + i) = -f.tau.y;
    rhs(2 * i) = an.x;
    rhs(2 * i + 1) = an.y;
  }
  const Eigen::Matrix<double, 5, 1> sol = m.colPivHouseholderQr().solve(rhs);
  return {sol(2), sol(3), sol(4)};
}

} // namespace

double hausdorff_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw GridError("hausdorff_distance: empty sample set");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

ReparamMap build_reparametrization(const NetworkState& net, const EnergyParams& params) {
  const AdmissibilityReport geo =
      geometric_admissibility(net, params, natural_flavor(net.topology()), kGridTolerance);
  if (!geo.passed()) {
    std::string names;
    for (const auto& f : geo.failures()) names += (names.empty() ? "" : ", ") + f;
    throw AdmissibilityError("reparametrization: geometry is not admissible (" + names + ")");
  }

  const std::size_t n = net.intervals();
  const double h = 1.0 / static_cast<double>(n);
  const auto junctions = net.junction_ends();
  auto is_junction = [&](End e) { return std::find(junctions.begin(), junctions.end(), e) != junctions.end(); };

  std::array<ThetaShape, 3> shapes;
  for (std::size_t i = 0; i < 3; ++i) {
    for (End e : {End::Start, End::Finish}) {
      const Jet jet = net.curve(i).jet(node_of(e, n));
      const double l = norm(jet.d1);
      shapes[i].a2[static_cast<std::size_t>(e)] = -dot(jet.d2, jet.d1) / (l * l);
    }
  }

  for (double radius = 0.25; radius >= 2 * h; radius /= 2) {
    for (auto& s : shapes) s.radius = radius;
    constexpr int kPasses = 4;
    for (int pass = 0; pass < kPasses; ++pass) {
      for (End e : {End::Start, End::Finish}) {
        std::optional<std::array<double, 3>> targets;
        if (is_junction(e)) {
          std::array<Jet, 3> jets;
          for (std::size_t i = 0; i < 3; ++i) jets[i] = composed_jet(net.curve(i).position(), shapes[i], e);
          targets = tangential_targets(jets, params.mu);
        }
        for (std::size_t i = 0; i < 3; ++i) {
          polish_end(net.curve(i).position(), shapes[i], e, params.mu,
                     targets ? std::optional<double>((*targets)[i]) : std::nullopt);
        }
      }
    }

    bool monotone = true;
    const std::size_t fine = 16 * n;
    for (const auto& s : shapes) {
      for (std::size_t q = 0; q <= fine && monotone; ++q) {
        monotone = s.derivative(static_cast<double>(q) / static_cast<double>(fine)) > 0.0;
      }
    }
    if (!monotone) continue;

    ReparamMap map;
    map.blend_radius = radius;
    for (std::size_t i = 0; i < 3; ++i) {
      std::vector<double> th(n + 1);
      for (std::size_t j = 0; j <= n; ++j) th[j] = shapes[i].value(static_cast<double>(j) * h);
      th.front() = 0.0;
      th.back() = 1.0;
      map.theta[i] = ScalarGrid(std::move(th));
      for (End e : {End::Start, End::Finish}) {
        const auto k = static_cast<std::size_t>(e);
        map.taylor[i][k] = {e == End::Start ? 0.0 : 1.0, 1.0, shapes[i].a2[k], 1.0, shapes[i].a4[k]};
      }
    }
    return map;
  }
  throw AdmissibilityError("reparametrization: could not blend the endpoint data into an increasing map");
}

NetworkState apply_reparametrization(const NetworkState& net, const ReparamMap& map) {
  std::array<std::vector<Vec2>, 3> pos;
  for (std::size_t i = 0; i < 3; ++i) {
    const CurveGrid& sigma = net.curve(i).position();
    if (map.theta[i].size() != sigma.size()) throw GridError("apply_reparametrization: grid mismatch");
    pos[i].resize(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) pos[i][j] = interpolate(sigma, map.theta[i][j]);
  }
  return net.with_positions(pos);
}

} // namespace elastinet
