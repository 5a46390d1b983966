#pragma once

#include <array>
#include <optional>

#include "hpbif/linalg.hpp"

namespace hpbif {

/// a0 λ⁴ + a1 λ³ + a2 λ² + a3 λ + a4.
struct QuarticCoefficients {
  double a0 = 1.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;

  cplx operator()(cplx z) const {
    return (((a0 * z + a1) * z + a2) * z + a3) * z + a4;
  }
  cplx derivative(cplx z) const {
    return ((4.0 * a0 * z + 3.0 * a1) * z + 2.0 * a2) * z + a3;
  }
  /// Largest coefficient magnitude, the natural scale for residuals.
  double scale() const;
};

/// Four eigenvalues sorted by real part, then imaginary part, descending.
struct Spectrum {
  std::array<cplx, 4> values{};

  const cplx& operator[](std::size_t i) const { return values[i]; }
  auto begin() const { return values.begin(); }
  auto end() const { return values.end(); }
};

enum class Normalization {
  /// ||q||_2 = 1 and the first nonzero component real positive.
  UnitNorm,
  /// q4 = 1 (falls back to the previous component when q4 vanishes).
  LastComponentUnit,
};

struct EigenPair {
  cplx lambda;
  CVec4 q;  // right: A q = λ q
  CVec4 p;  // left:  Aᵀ p = conj(λ) p, <p, q> = 1
};

struct EigenOptions {
  Normalization normalization = Normalization::UnitNorm;
  /// Use this right vector instead of computing one (rescaling is not applied;
  /// p is still fitted so that <p, q> = 1).
  std::optional<CVec4> q_override;
  /// Pivots below rank_tol * ||A - λI|| count toward the null space.
  double rank_tol = 1e-9;
  /// Required residual ||Aq - λq|| <= residual_tol * ||A|| * ||q||.
  double residual_tol = 1e-10;
};

/// Coefficients of det(λI - m), a0 = 1.
QuarticCoefficients char_poly(const Mat4& m);

/// Roots of a real quartic, conjugate-paired and sorted like Spectrum.
Spectrum quartic_roots(const QuarticCoefficients& c);

Spectrum eigenvalues(const Mat4& m);

EigenPair eigenpair_at(const Mat4& m, cplx lambda,
                       const EigenOptions& options = {});

/// Solves (shift·I - m) x = rhs. Throws Singularity when shift is
/// (numerically) an eigenvalue of m.
CVec4 solve_shifted(const Mat4& m, cplx shift, const CVec4& rhs);

/// Solves a general complex 4x4 system with partial pivoting.
CVec4 solve(const CMat4& a, const CVec4& rhs);

cplx determinant(const CMat4& a);

/// Rescales q according to the normalization rule.
CVec4 normalize(const CVec4& q, Normalization rule);

}  // namespace hpbif
