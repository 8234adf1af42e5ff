#include "elastinet/flow.hpp"

#include "elastinet/errors.hpp"
#include "elastinet/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace elastinet {

void SchemeConfig::validate() const {
  if (!(dt_init > 0.0 && dt_min > 0.0 && t_final > 0.0)) throw Error("scheme: dt_init, dt_min and t_final must be positive");
  if (!(dt_min < dt_init)) throw Error("scheme: dt_min must be smaller than dt_init");
  if (!(tolerance > 0.0 && energy_tolerance >= 0.0 && regularity_floor > 0.0)) {
    throw Error("scheme: tolerances and the regularity floor must be positive");
  }
  if (boundary_corrections < 0) throw Error("scheme: boundary_corrections must be non-negative");
  if (growth_delay == 0) throw Error("scheme: growth_delay must be positive");
}

MonitorReport monitor(const NetworkState& net, const EnergyParams& params, Flavor flavor) {
  MonitorReport m;
  m.min_speed = net.min_speed();
  m.span = std::numeric_limits<double>::infinity();
  for (End e : net.junction_ends()) m.span = std::min(m.span, normal_span_measure(net, e));
  if (!(m.min_speed >= kDefaultRegularityFloor)) {
    m.energy = std::numeric_limits<double>::quiet_NaN();
    m.residuals.add("regularity", m.min_speed, Bound::Lower, kDefaultRegularityFloor);
    return m;
  }
  m.energy = network_energy(net, params);
  if (flavor == Flavor::C0) {
    m.residuals = junction_residuals_c0(net, params);
    m.curvature = m.residuals.max_with_suffix(".curvature");
    m.second = m.residuals.max_with_suffix(".second");
  } else {
    m.residuals = junction_residuals_c1(net, params);
    m.angle = m.residuals.value("x0.angle");
    m.curvature = m.residuals.value("x0.curvature_sum");
    m.second = std::max(m.residuals.value("x0.tangential_second"), m.residuals.value("x1.second"));
  }
  m.concurrency = m.residuals.max_with_suffix(".concurrency");
  m.third = m.residuals.max_with_suffix(".third");
  return m;
}

FlowState initial_state(const NetworkState& net, const EnergyParams& params) {
  FlowState s;
  s.net = net;
  s.energy = network_energy(net, params);
  return s;
}

std::array<BoundaryData, 2> boundary_data(const LinearizedSystem& system, const NetworkState& current,
                                          const EnergyParams& params) {
  std::array<std::vector<Vec2>, 3> pos;
  for (std::size_t i = 0; i < 3; ++i) pos[i] = current.curve(i).position().data();
  const auto measured = system.measure(pos);
  std::array<BoundaryData, 2> out{};
  const std::size_t n = current.intervals();

  // Each nonlinear condition g(γ) = 0 enters as: frozen linear row of γ = (same row at the
  // current iterate) ± g(current), the sign chosen so that the leading parts cancel.
  for (End e : {End::Start, End::Finish}) {
    const std::size_t k = static_cast<std::size_t>(e);
    const std::size_t j = node_of(e, n);
    BoundaryData& b = out[k];
    if (system.topology() == Topology::Triod && e == End::Finish) {
      b.endpoint = *current.endpoints();
      continue;
    }
    std::array<LocalFrame, 3> f;
    for (std::size_t i = 0; i < 3; ++i) f[i] = local_frame(current.curve(i).jet(j));
    Vec2 third{};
    if (system.flavor() == Flavor::C0) {
      for (const auto& fi : f) third += fi.k_s * fi.nu - 0.5 * params.mu * fi.tau;
      b.third = measured[k].third + third;
      continue;
    }
    Vec2 tau_sum{};
    double k_sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      tau_sum += f[i].tau;
      k_sum += f[i].k;
      third += f[i].k_s * f[i].nu - 0.5 * f[i].k * f[i].k * f[i].tau;
      b.tangential[i] = measured[k].tangential[i] - dot(current.curve(i).derivative(2)[j], f[i].tau);
    }
    b.angle = measured[k].angle + tau_sum;
    b.curvature = measured[k].curvature - k_sum;
    b.third = measured[k].third + third;
  }
  return out;
}

FlowState step(const FlowState& state, double dt, const EnergyParams& params, Flavor flavor, int boundary_corrections) {
  const NetworkState& phi = state.net;
  LinearData data;
  data.dt = dt;
  for (std::size_t i = 0; i < 3; ++i) {
    const CurveSample& curve = phi.curve(i);
    const VelocityField v = motion_rhs(curve, params);
    data.f[i] = v.remainder.data();
    data.psi[i] = curve.position().data();
    data.third[i].resize(curve.size());
    // The third-order part of the bracket is dispersive; it is taken implicitly with
    // frozen coefficients, and its explicit value is moved to f.
    for (std::size_t j = 0; j < curve.size(); ++j) {
      const Jet jet = curve.jet(j);
      const auto b = third_order_jacobian(jet);
      data.third[i][j] = b;
      data.f[i][j] += Vec2{b[0] * jet.d3.x + b[1] * jet.d3.y, b[2] * jet.d3.x + b[3] * jet.d3.y};
    }
  }
  LinearizedSystem system = assemble(phi, flavor, data);
  system.set_boundary_data(boundary_data(system, phi, params));
  const LinearSolver solver(system);
  auto positions = solver.solve(system.rhs(), &data.psi);
  for (int c = 0; c < boundary_corrections; ++c) {
    const NetworkState iterate = phi.with_positions(positions);
    for (const auto& c : iterate.curves()) c.require_regular();
    system.set_boundary_data(boundary_data(system, iterate, params));
    positions = solver.solve(system.rhs(), &data.psi);
  }

  FlowState next;
  next.time = state.time + dt;
  next.net = phi.with_positions(positions);
  for (const auto& c : next.net.curves()) c.require_regular();
  next.energy = network_energy(next.net, params);
  next.linear_residual = system.boundary_residuals(positions);
  return next;
}

namespace {

TraceRecord record_of(const FlowState& s, double dt, const EnergyParams& params, Flavor flavor) {
  TraceRecord r;
  r.time = s.time;
  r.dt = dt;
  r.energy = s.energy;
  r.report = monitor(s.net, params, flavor);
  r.linear_residual = s.linear_residual;
  return r;
}

} // namespace

FlowTrace run(const NetworkState& initial, const SchemeConfig& config, const EnergyParams& params, Flavor flavor) {
  config.validate();
  const AdmissibilityReport adm = parametric_admissibility(initial, params, flavor, kGridTolerance);
  if (!adm.passed()) {
    std::string names;
    for (const auto& f : adm.failures()) names += (names.empty() ? "" : ", ") + f;
    throw AdmissibilityError("initial data is not admissible (" + names + ")");
  }

  FlowTrace trace;
  FlowState state = initial_state(initial, params);
  const double e0 = state.energy;
  auto snapshot = [&](TraceRecord& r) {
    r.snapshot = trace.snapshots.size();
    trace.snapshots.push_back({state.time, state.net});
  };
  trace.records.push_back(record_of(state, 0.0, params, flavor));
  snapshot(trace.records.back());

  double dt = config.dt_init;
  std::size_t streak = 0;
  std::size_t accepted = 0;
  const double t_eps = 1e-12 * std::max(1.0, config.t_final);
  trace.termination = "t_final";
  while (state.time < config.t_final - t_eps) {
    if (dt < config.dt_min) {
      trace.termination = "dt underflow";
      break;
    }
    const double h = std::min(dt, config.t_final - state.time);
    FlowState next;
    try {
      next = step(state, h, params, flavor, config.boundary_corrections);
    } catch (const SingularSystemError&) {
      ++trace.rejected_steps;
      dt /= 2;
      streak = 0;
      continue;
    } catch (const RegularityError&) {
      trace.termination = "regularity floor";
      break;
    }
    if (next.net.min_speed() < config.regularity_floor) {
      trace.termination = "regularity floor";
      break;
    }
    if (!std::isfinite(next.energy) || next.energy > state.energy + config.energy_tolerance * h * e0) {
      ++trace.rejected_steps;
      dt /= 2;
      streak = 0;
      continue;
    }
    if (std::abs(config.t_final - next.time) <= t_eps) next.time = config.t_final;
    state = std::move(next);
    ++accepted;
    trace.max_linear_residual = std::max(trace.max_linear_residual, state.linear_residual.max());
    trace.records.push_back(record_of(state, h, params, flavor));
    if (config.snapshot_every > 0 && accepted % config.snapshot_every == 0) snapshot(trace.records.back());
    if (++streak >= config.growth_delay && dt < config.dt_init) {
      dt = std::min(2 * dt, config.dt_init);
      streak = 0;
    }
  }
  if (!trace.records.back().snapshot) snapshot(trace.records.back());
  trace.final_state = state;
  return trace;
}

std::string FlowTrace::to_csv() const {
  std::ostringstream os;
  os << "t,energy,res_concurrency,res_angle,res_curvature,res_second,res_third,min_speed\n";
  for (const auto& r : records) {
    const MonitorReport& m = r.report;
    os << format_real(r.time) << ',' << format_real(r.energy) << ',' << format_real(m.concurrency) << ','
       << format_real(m.angle) << ',' << format_real(m.curvature) << ',' << format_real(m.second) << ','
       << format_real(m.third) << ',' << format_real(m.min_speed) << '\n';
  }
  return os.str();
}

std::string FlowTrace::to_json(const EnergyParams& params) const {
  std::ostringstream os;
  os << "{\n\"termination\": \"" << termination << "\",\n\"steps\": " << (records.size() - 1)
     << ",\n\"rejected_steps\": " << rejected_steps << ",\n\"max_linear_residual\": " << format_real(max_linear_residual)
     << ",\n\"snapshots\": [\n";
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    os << "{\"time\": " << format_real(snapshots[s].time) << ",\n\"network\": " << snapshot_json(snapshots[s].net, params)
       << "}" << (s + 1 < snapshots.size() ? ",\n" : "\n");
  }
  os << "]\n}\n";
  return os.str();
}

} // namespace elastinet
