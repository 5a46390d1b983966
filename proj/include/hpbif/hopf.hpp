#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "hpbif/model.hpp"
#include "hpbif/spectra.hpp"
#include "hpbif/tolerances.hpp"

namespace hpbif {

/// Taylor data of a vector field at an equilibrium: F(x0 + x) = A x +
/// B(x,x)/2 + C(x,x,x)/6 + O(|x|⁴), with B and C extended to complex vectors.
struct LocalExpansion {
  Mat4 A;
  std::function<CVec4(const CVec4&, const CVec4&)> B;
  std::function<CVec4(const CVec4&, const CVec4&, const CVec4&)> C;
};

LocalExpansion expansion_at_A4(const ModelParams& p);

struct HopfOptions {
  Normalization normalization = Normalization::UnitNorm;
  std::optional<CVec4> q_override;
  /// Accept a critical pair off the imaginary axis (used to continue the
  /// coefficient to nearby parameters, e.g. for shooting guesses).
  bool allow_off_axis = false;
};

struct HopfReport {
  /// Critical eigenvalue γ + iω used for q and p (γ ≈ 0 on the Hopf curve).
  cplx lambda;
  double omega0 = 0.0;
  CVec4 q, p;
  CVec4 h11, h20;
  cplx G21;
  /// Re G21 / (2 ω0).
  double l1 = 0.0;
  /// l1 / ω0: the cubic coefficient after rescaling time to unit frequency.
  double l1_unit_frequency = 0.0;
  /// d Re λ / ds along the normalized Δ gradient in the (k1, k2) plane.
  /// NaN when not computed (generic systems).
  double transversality = std::numeric_limits<double>::quiet_NaN();
  std::string normalization_tag;
};

/// The eigenvalue with positive imaginary part closest to the imaginary axis.
cplx critical_eigenvalue(const Spectrum& s);

/// Projection formulas for h11, h20, G21 and l1 on a generic expansion.
HopfReport first_lyapunov(const LocalExpansion& e, const HopfOptions& opt = {});

/// ω0 = sqrt(a3 / a1) at A4. Throws NotOnSigma when |Δ| exceeds the band and
/// Degeneracy when a3 / a1 <= 0.
double omega0_at(const ModelParams& p, const ToleranceSettings& tol = {});

/// First Lyapunov coefficient at A4 for parameters on the Hopf curve,
/// including the transversality derivative along the Δ gradient.
HopfReport lyapunov_l1(const ModelParams& p, const HopfOptions& opt = {},
                       const ToleranceSettings& tol = {});

struct Transversality {
  double derivative = 0.0;
  /// False when |derivative| is below the tangency threshold.
  bool transversal = false;
};

/// d/ds Re λ(p + s·direction) at s = 0 for the tracked critical pair.
Transversality transversality_at(const ModelParams& p,
                                 std::array<double, 2> direction);

/// Same derivative for an arbitrary matrix family (tracked critical pair).
Transversality transversality_of(const std::function<Mat4(double)>& family,
                                 double step, double threshold);

enum class HopfType { Subcritical, Supercritical, Degenerate };

std::string_view to_string(HopfType t);

HopfType classify_hopf(double l1, const ToleranceSettings& tol = {});
HopfType classify_hopf(const ModelParams& p, const ToleranceSettings& tol = {});

}  // namespace hpbif
