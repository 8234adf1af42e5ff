#pragma once

#include "elastinet/geometry.hpp"
#include "elastinet/network.hpp"

#include <array>
#include <functional>

namespace elastinet {

/// Bracket vector V of the parametric motion γ_t = −V at one node:
///   V = 2γ_xxxx/|γ_x|⁴ − 12γ_xxx⟨γ_xx,γ_x⟩/|γ_x|⁶ − 5γ_xx|γ_xx|²/|γ_x|⁶
///       − 8γ_xx⟨γ_xxx,γ_x⟩/|γ_x|⁶ + 35γ_xx⟨γ_xx,γ_x⟩²/|γ_x|⁸ − μγ_xx/|γ_x|².
/// Its normal part is A ν and its tangential part is T τ.
Vec2 parametric_velocity(const Jet& jet, double mu);

/// ∂V/∂γ_xxx at one node, row-major: −12⟨γ_xx,γ_x⟩/|γ_x|⁶ Id − 8 γ_xx γ_xᵀ/|γ_x|⁶.
std::array<double, 4> third_order_jacobian(const Jet& jet);

/// A = 2k_ss + k³ − μk at one node.
double normal_scalar_at(const LocalFrame& f, double mu);
/// T = ⟨V, τ⟩ at one node.
double tangential_scalar_at(const Jet& jet, double mu);

ScalarGrid normal_scalar(const CurveSample& curve, const EnergyParams& params);
/// Cross-check route: A = ⟨V, ν⟩ from the parametric bracket.
ScalarGrid normal_scalar_parametric(const CurveSample& curve, const EnergyParams& params);
ScalarGrid tangential_scalar(const CurveSample& curve, const EnergyParams& params);

struct VelocityField {
  ScalarGrid A;
  ScalarGrid T;
  CurveGrid rhs;       // −Aν − Tτ
  CurveGrid principal; // −2γ_xxxx/|γ_x|⁴
  CurveGrid remainder; // rhs − principal
};

VelocityField motion_rhs(const CurveSample& curve, const EnergyParams& params);

/// Perturbation ψ^i(x) of each curve, evaluated on the grid.
using Perturbation = std::array<std::function<Vec2(double)>, 3>;

struct FirstVariation {
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Throws AdmissibilityError if ψ does not match at the junctions (Theta) or vanish
/// at the fixed endpoints (Triod).
void check_perturbation(const NetworkState& net, const Perturbation& psi, double tolerance = 1e-12);

/// Directional derivative of E_μ along ψ: the first-variation formula (bulk plus both
/// boundary brackets) against a central difference of the energy. Both sides use
/// 11-point stencils and Simpson quadrature, independent of the scheme's stencils.
/// Throws GridError for an odd number of intervals.
FirstVariation first_variation_oracle(const NetworkState& net, const EnergyParams& params, const Perturbation& psi,
                                      double step = 1e-5);

} // namespace elastinet
