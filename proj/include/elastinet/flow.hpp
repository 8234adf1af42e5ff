#pragma once

#include "elastinet/linear.hpp"
#include "elastinet/network.hpp"
#include "elastinet/snapshot.hpp"

#include <optional>
#include <string>
#include <vector>

namespace elastinet {

struct SchemeConfig {
  double dt_init = 1e-4;
  double dt_min = 1e-10;
  double t_final = 0.1;
  /// Imposed boundary rows must hold to this after every step.
  double tolerance = 1e-8;
  /// A step is rejected when E_new > E_old + energy_tolerance·dt·E(0).
  double energy_tolerance = 1e-8;
  /// The run stops when the minimal speed drops below this.
  double regularity_floor = 1e-3;
  /// Re-solves with the nonlinear boundary data evaluated at the latest iterate.
  int boundary_corrections = 2;
  /// Accepted steps between stored snapshots (0: first and last only).
  std::size_t snapshot_every = 0;
  /// Accepted steps at one dt before it may grow again.
  std::size_t growth_delay = 5;

  /// Throws Error unless all values are positive and dt_min < dt_init.
  void validate() const;
};

/// Junction diagnostics of one state, as written to the trace CSV.
struct MonitorReport {
  double energy = 0.0;
  double concurrency = 0.0;
  double angle = 0.0; // C1 only
  double curvature = 0.0;
  double second = 0.0;
  double third = 0.0;
  double span = 0.0; // smallest normal span over the junctions
  double min_speed = 0.0;
  AdmissibilityReport residuals;
};

MonitorReport monitor(const NetworkState& net, const EnergyParams& params, Flavor flavor);

struct FlowState {
  double time = 0.0;
  NetworkState net;
  double energy = 0.0;
  /// Residuals of the imposed (linearized) boundary rows from the step that produced this state.
  BoundaryResiduals linear_residual;
};

FlowState initial_state(const NetworkState& net, const EnergyParams& params);

/// Nonlinear boundary data evaluated at `current`, for the rows of `system`.
std::array<BoundaryData, 2> boundary_data(const LinearizedSystem& system, const NetworkState& current,
                                          const EnergyParams& params);

/// One implicit Euler step with frozen coefficient 2/|γ_x|⁴ and explicit remainder.
/// Throws SingularSystemError or RegularityError.
FlowState step(const FlowState& state, double dt, const EnergyParams& params, Flavor flavor,
               int boundary_corrections = 2);

struct TraceRecord {
  double time = 0.0;
  double dt = 0.0;
  double energy = 0.0;
  MonitorReport report;
  BoundaryResiduals linear_residual;
  std::optional<std::size_t> snapshot; // index into FlowTrace::snapshots
};

struct FlowTrace {
  std::vector<TraceRecord> records;
  std::vector<Snapshot> snapshots;
  std::string termination; // "t_final", "regularity floor" or "dt underflow"
  FlowState final_state;
  std::size_t rejected_steps = 0;
  /// Largest imposed boundary-row residual over all accepted steps.
  double max_linear_residual = 0.0;

  std::string to_csv() const;
  std::string to_json(const EnergyParams& params) const;
};

/// Throws AdmissibilityError when the initial data is not parametrically admissible.
FlowTrace run(const NetworkState& initial, const SchemeConfig& config, const EnergyParams& params, Flavor flavor);

} // namespace elastinet
