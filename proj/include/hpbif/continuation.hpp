#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hpbif/model.hpp"
#include "hpbif/tolerances.hpp"

namespace hpbif {

/// A point of the Hopf curve Σ = {Δ = 0} at fixed c2.
struct CurvePoint {
  double k1 = 0.0;
  double k2 = 0.0;
  double omega0 = 0.0;
  /// Sign of the first Lyapunov coefficient: +1, -1 or 0.
  int l1_sign = 0;
  double delta_residual = 0.0;
  /// More than one sign change of Δ was found on the slice.
  bool multiple_roots = false;
};

/// Δ at A4 for the base parameters with (k1, k2, c2) overridden.
double delta_of(double k1, double k2, double c2,
                const ModelParams& base = table_parameters());

/// a3² - a1 a2 a3 + a1² a4 with denominators cleared, i.e. -Δ·D⁴ with
/// D = α1²φ1φ2 + μ1²c1c2k1k2. A polynomial in (k1, k2, c2).
double hopf_polynomial(double k1, double k2, double c2,
                       const ModelParams& base = table_parameters());

/// Smallest k2 in (0, k1] with Δ(k1, k2, c2) = 0, by a 256-point log-spaced
/// sign scan and bracketed refinement. Empty when Δ keeps its sign.
std::optional<CurvePoint> solve_sigma_k2(
    double k1, double c2, const ModelParams& base = table_parameters(),
    const ToleranceSettings& tol = {});

/// Smallest k1 in [k2, k1_max) with Δ(k1, k2, c2) = 0.
std::optional<double> solve_sigma_k1(
    double k2, double c2, const ModelParams& base = table_parameters());

/// The Hopf point of the base table with k2 = 0.001 (k1 ≈ 0.0033154).
ModelParams reference_hopf_point(const ModelParams& base = table_parameters());

/// Σ sampled on an n-point k1 grid spanning the part of (0, k1_max) where it
/// lies in the admissible set. Points are ordered by k1; slices are solved on
/// `threads` workers.
std::vector<CurvePoint> trace_sigma(double c2, std::size_t n_points,
                                    const ModelParams& base = table_parameters(),
                                    unsigned threads = 1);

/// Σ at the given k1 values (slices without a root are skipped).
std::vector<CurvePoint> trace_sigma_at(double c2, std::span<const double> k1s,
                                       const ModelParams& base = table_parameters(),
                                       unsigned threads = 1);

/// (∂Δ/∂k1, ∂Δ/∂k2) by Richardson-extrapolated central differences.
std::array<double, 2> gradient_delta(double k1, double k2, double c2,
                                     const ModelParams& base = table_parameters());

/// Same for hopf_polynomial.
std::array<double, 2> gradient_hopf_polynomial(
    double k1, double k2, double c2,
    const ModelParams& base = table_parameters());

/// Roots of N(k1) = Δ(k1, k1, c2) on (0, k1_max(c2)), from a sign scan.
std::vector<double> diagonal_roots(double c2,
                                   const ModelParams& base = table_parameters());

/// min over k1 in (0, k1_max) of Δ(k1, k1, c2) and where it is attained.
std::pair<double, double> diagonal_minimum(
    double c2, const ModelParams& base = table_parameters());

struct TangencyResult {
  double c2_star = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  std::array<double, 2> gradient{};
  /// d²c2/dk1² along N(k1, c2) = 0 at the tangency; negative at a maximum.
  double second_derivative = 0.0;
  double k1_max = 0.0;
  std::vector<std::string> diagnostics;
};

/// The c2 at which Σ touches the diagonal k1 = k2 and the touching point.
TangencyResult find_tangency(const ModelParams& base = table_parameters());

}  // namespace hpbif
