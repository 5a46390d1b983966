#pragma once

namespace hpbif {

/// Numerical tolerances shared by every module. Defaults are the values the
/// library is tested with; widen `sigma_band` when working at rounded points.
struct ToleranceSettings {
  /// Relative residual accepted for closed-form equilibria.
  double equilibrium = 1e-9;
  /// |Re λ| <= axis_band * ||J||_inf counts as "on the imaginary axis".
  double axis_band = 1e-8;
  /// |Δ| <= sigma_band * a1*a2*a3 counts as "on the Hopf curve".
  double sigma_band = 1e-6;
  /// |R - 1| below this marks a degenerate (colliding) equilibrium.
  double reproduction_degenerate = 1e-12;
  /// |l1| below this is reported as a degenerate Hopf point.
  double lyapunov_zero = 1e-14;
  /// Absolute accuracy of Σ roots in k2.
  double root_abs = 1e-14;
  /// Local error tolerance of the Runge-Kutta integrator (relative and absolute
  /// per unit of state scale).
  double integrator = 1e-11;
  /// Shooting converges when the return-map residual falls below this times
  /// the anchor norm.
  double shooting = 1e-10;
  /// Floquet multipliers with |μ| > 1 + floquet_band are unstable.
  double floquet_band = 1e-6;
};

}  // namespace hpbif
