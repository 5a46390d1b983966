#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpbif/errors.hpp"
#include "hpbif/hopf.hpp"
#include "hpbif/linalg.hpp"
#include "hpbif/model.hpp"
#include "hpbif/tolerances.hpp"

namespace hpbif {

/// An autonomous vector field on R⁴ with its Jacobian.
struct AutonomousSystem {
  std::function<Vec4(const Vec4&)> field;
  std::function<Mat4(const Vec4&)> jacobian;
};

AutonomousSystem model_system(const ModelParams& p);

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  /// Largest scaled error estimate among accepted steps (≤ 1 by construction).
  double max_error_estimate = 0.0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<State> x;
  IntegratorStats stats;
};

/// Raised when the step size underflows or the state stops being finite.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double t, const State& last)
      : Error(ErrorCategory::IntegrationFailure, what), time_(t), last_(last) {}
  double time() const { return time_; }
  const State& last_state() const { return last_; }

 private:
  double time_;
  State last_;
};

/// Dormand-Prince 5(4) with PI step control. `tol` bounds the scaled local
/// error |e_i| / (tol (1 + |y_i|)). With sample_dt > 0 the trajectory is
/// resampled on a uniform grid by cubic Hermite interpolation, otherwise
/// every accepted step is recorded.
Trajectory integrate(const AutonomousSystem& sys, const State& x0, double t_end,
                     double tol, double sample_dt = 0.0);
Trajectory integrate(const ModelParams& p, const State& x0, double t_end,
                     double tol = 1e-9, double sample_dt = 0.0);

enum class OrbitVerdict { UnstableSaddleCycle, Stable, Indeterminate };
std::string_view to_string(OrbitVerdict v);

struct PeriodicOrbit {
  /// Point of the cycle on the Poincaré section.
  State anchor{};
  double period = 0.0;
  std::array<cplx, 4> multipliers{};
  OrbitVerdict verdict = OrbitVerdict::Indeterminate;
  /// max ‖x(t) − center‖ over one period.
  double amplitude = 0.0;
  /// ‖flow(anchor, T) − anchor‖.
  double closure = 0.0;
  std::vector<double> residual_history;
  /// One period sampled uniformly (first sample is the anchor).
  Trajectory cycle;
};

/// Newton shooting failed; carries the residuals seen so far.
class ShootingFailure : public Error {
 public:
  ShootingFailure(const std::string& what, std::vector<double> history)
      : Error(ErrorCategory::NotFound, what), history_(std::move(history)) {}
  const std::vector<double>& residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Where to look for a cycle born at a Hopf point of `sys`.
struct ShootingSetup {
  State center{};
  /// Critical eigenvector at the center; its imaginary part (after rotating
  /// q so that Re q ⟂ Im q) is the section normal.
  CVec4 q{};
  double omega = 0.0;
  /// Distance of the initial guess from the center along Re q.
  double hint_radius = 0.0;
  std::size_t cycle_samples = 256;
};

PeriodicOrbit find_periodic_orbit(const AutonomousSystem& sys,
                                  const ShootingSetup& setup,
                                  const ToleranceSettings& tol = {});

/// Cycle near A4 for parameters just inside the stable side of the Hopf
/// curve. The default hint is the normal-form radius 2|w|‖Re q‖ with
/// |w| = sqrt(−γ / (ω l1)).
PeriodicOrbit find_periodic_orbit(const ModelParams& p,
                                  std::optional<double> hint_radius = {},
                                  const ToleranceSettings& tol = {});

/// Normal-form prediction of the hint radius (state units) from the critical
/// eigenvalue γ + iω, l1 and q of a Hopf report.
double predicted_cycle_radius(const HopfReport& r);
double predicted_cycle_radius(const ModelParams& p);

/// Eigenvalues of the monodromy matrix over one period. Throws Accuracy
/// when no multiplier lies within 1e-2 of 1.
std::array<cplx, 4> floquet_multipliers(const AutonomousSystem& sys,
                                        const PeriodicOrbit& orbit,
                                        const ToleranceSettings& tol = {});
std::array<cplx, 4> floquet_multipliers(const ModelParams& p,
                                        const PeriodicOrbit& orbit,
                                        const ToleranceSettings& tol = {});

/// Unstable saddle cycle when exactly one multiplier other than the trivial
/// one leaves the unit circle, stable when all of them are inside.
OrbitVerdict classify_multipliers(const std::array<cplx, 4>& mu, double band);

}  // namespace hpbif
