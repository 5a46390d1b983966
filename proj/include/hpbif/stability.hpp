#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpbif/model.hpp"
#include "hpbif/spectra.hpp"
#include "hpbif/tolerances.hpp"

namespace hpbif {

struct RouthHurwitz {
  bool stable = false;
  double delta = 0.0;
  bool positive_coeffs = false;
};

/// Quartic Routh-Hurwitz test: all roots in the open left half-plane iff
/// a1..a4 > 0 and Δ = a1 a2 a3 - a0 a3² - a1² a4 > 0. Requires a0 > 0.
RouthHurwitz routh_hurwitz(const QuarticCoefficients& c);

/// Closed-form characteristic polynomial coefficients of J(A4).
QuarticCoefficients a_coefficients(const ModelParams& p);

/// Routh-Hurwitz discriminant of J(A4): positive means A4 is asymptotically
/// stable, negative unstable, zero a Hopf candidate.
double delta_at_A4(const ModelParams& p);

/// Scale used to judge |Δ| relative to its leading term, a1 a2 a3.
double delta_scale(const QuarticCoefficients& c);

/// (∂Δ/∂k1, ∂Δ/∂k2) at p by central differences with one Richardson step
/// (base steps 1e-7 * max(k, 1e-4)).
std::array<double, 2> delta_gradient_k(const ModelParams& p);

struct BoundarySpectrum {
  Spectrum spectrum;
  /// True when the stage-pair sub-block with the φ-threshold has complex roots
  /// (A2: host pair, A3: parasitoid pair). Always false for A1.
  bool complex_subpair = false;
};

/// Closed-form eigenvalues of J at A1, A2 or A3. Throws InvalidInput for A4.
BoundarySpectrum boundary_spectra(const ModelParams& p, EquilibriumId which);

enum class ClassKind {
  AsymptoticallyStable,
  SaddleType,
  MarginalHopfCandidate,
  Degenerate,
};

std::string_view to_string(ClassKind k);

struct Classification {
  ClassKind kind = ClassKind::Degenerate;
  int n_negative = 0;
  int n_positive = 0;
  int n_axis = 0;
  Spectrum spectrum;
  /// Filled for A4 only.
  std::optional<RouthHurwitz> routh;
  std::vector<std::string> diagnostics;

  /// "saddle 2-2", "asymptotically stable", ...
  std::string label() const;
};

Classification classify_spectrum(const Spectrum& s, double jacobian_norm,
                                 const ToleranceSettings& tol = {});

/// Classifies the requested equilibrium from its Jacobian spectrum. For A4
/// the Routh-Hurwitz verdict is computed too and must agree with the
/// spectrum (Consistency error otherwise).
Classification classify(const ModelParams& p, EquilibriumId which,
                        const ToleranceSettings& tol = {});

}  // namespace hpbif
