#include "hpbif/hopf.hpp"

#include <cmath>
#include <sstream>

#include "hpbif/errors.hpp"
#include "hpbif/stability.hpp"

namespace hpbif {

LocalExpansion expansion_at_A4(const ModelParams& p) {
  const State a4 = coexistence_equilibrium(p);
  return {jacobian(p, a4),
          [p](const CVec4& x, const CVec4& y) { return bilinear_B(p, x, y); },
          [](const CVec4& x, const CVec4& y, const CVec4& z) {
            return trilinear_C(x, y, z);
          }};
}

cplx critical_eigenvalue(const Spectrum& s) {
  const cplx* best = nullptr;
  for (const auto& z : s) {
    if (z.imag() <= 0.0) continue;
    if (!best || std::abs(z.real()) < std::abs(best->real())) best = &z;
  }
  if (!best)
    throw Error(ErrorCategory::Degeneracy, "no complex eigenvalue pair");
  return *best;
}

HopfReport first_lyapunov(const LocalExpansion& e, const HopfOptions& opt) {
  const Spectrum spec = eigenvalues(e.A);
  const cplx lambda = critical_eigenvalue(spec);
  const double band = 1e-8 * norm_inf(e.A);
  if (!opt.allow_off_axis && std::abs(lambda.real()) > band) {
    std::ostringstream os;
    os << "critical pair " << lambda << " is off the imaginary axis";
    throw Error(ErrorCategory::NotOnSigma, os.str());
  }
  for (const auto& z : spec) {
    if (z != lambda && z != std::conj(lambda) && std::abs(z.real()) <= band) {
      throw Error(ErrorCategory::Degeneracy,
                  "more than one pair of critical eigenvalues");
    }
  }

  HopfReport r;
  r.lambda = lambda;
  r.omega0 = lambda.imag();

  EigenOptions eo;
  eo.normalization = opt.normalization;
  eo.q_override = opt.q_override;
  const EigenPair pair = eigenpair_at(e.A, lambda, eo);
  r.q = pair.q;
  r.p = pair.p;
  if (opt.q_override) {
    r.normalization_tag = "override";
  } else {
    r.normalization_tag = opt.normalization == Normalization::UnitNorm
                              ? "unit-norm"
                              : "last-component-unit";
  }

  const CVec4 qb = conj(r.q);
  r.h11 = solve_shifted(e.A, 0.0, e.B(r.q, qb));  // -A⁻¹ B(q, q̄)
  try {
    r.h20 = solve_shifted(e.A, cplx(0.0, 2.0 * r.omega0), e.B(r.q, r.q));
  } catch (const Error& err) {
    if (err.category() != ErrorCategory::Singularity) throw;
    throw Error(ErrorCategory::Degeneracy,
                std::string("2iω0 resonance: ") + err.what());
  }
  const CVec4 rhs = e.C(r.q, r.q, qb) + e.B(qb, r.h20) + 2.0 * e.B(r.q, r.h11);
  r.G21 = inner(r.p, rhs);
  r.l1 = r.G21.real() / (2.0 * r.omega0);
  r.l1_unit_frequency = r.l1 / r.omega0;
  return r;
}

double omega0_at(const ModelParams& p, const ToleranceSettings& tol) {
  const auto c = a_coefficients(p);
  const double delta = routh_hurwitz(c).delta;
  const double band = tol.sigma_band * delta_scale(c);
  if (!(std::abs(delta) <= band)) {
    std::ostringstream os;
    os << "delta = " << delta << " exceeds the Hopf-curve band " << band;
    throw Error(ErrorCategory::NotOnSigma, os.str());
  }
  const double ratio = c.a3 / c.a1;
  if (!(ratio > 0.0))
    throw Error(ErrorCategory::Degeneracy, "a3 / a1 is not positive");
  return std::sqrt(ratio);
}

HopfReport lyapunov_l1(const ModelParams& p, const HopfOptions& opt,
                       const ToleranceSettings& tol) {
  validate(p);
  const double omega_formula = omega0_at(p, tol);
  HopfOptions o = opt;
  // The band on Δ already certifies the Hopf curve; the eigenvalue band is
  // only a consistency aid here.
  o.allow_off_axis = true;
  HopfReport r = first_lyapunov(expansion_at_A4(p), o);

  const auto c = a_coefficients(p);
  const double strict = ToleranceSettings{}.sigma_band * delta_scale(c);
  if (std::abs(routh_hurwitz(c).delta) <= strict &&
      std::abs(omega_formula - r.omega0) > 1e-6) {
    std::ostringstream os;
    os << "sqrt(a3/a1) = " << omega_formula << " but eigen-solver gives "
       << r.omega0;
    throw Error(ErrorCategory::Consistency, os.str());
  }

  const auto g = delta_gradient_k(p);
  const double gn = std::hypot(g[0], g[1]);
  if (gn > 0.0) {
    r.transversality = transversality_at(p, {g[0] / gn, g[1] / gn}).derivative;
  }
  return r;
}

Transversality transversality_of(const std::function<Mat4(double)>& family,
                                 double step, double threshold) {
  const cplx lambda0 = critical_eigenvalue(eigenvalues(family(0.0)));
  auto track = [&](double s, bool& ambiguous) {
    const Spectrum spec = eigenvalues(family(s));
    double d1 = INFINITY, d2 = INFINITY;
    cplx best = spec[0];
    for (const auto& z : spec) {
      const double d = std::abs(z - lambda0);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = z;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (d2 <= 2.0 * d1) ambiguous = true;
    return best.real();
  };
  for (int attempt = 0; attempt < 6; ++attempt, step *= 0.5) {
    bool ambiguous = false;
    const double coarse = (track(step, ambiguous) - track(-step, ambiguous)) /
                          (2.0 * step);
    const double fine =
        (track(0.5 * step, ambiguous) - track(-0.5 * step, ambiguous)) / step;
    if (ambiguous) continue;
    const double d = (4.0 * fine - coarse) / 3.0;
    return {d, std::abs(d) > threshold};
  }
  throw Error(ErrorCategory::Convergence,
              "critical eigenvalue pair cannot be tracked (collision)");
}

Transversality transversality_at(const ModelParams& p,
                                 std::array<double, 2> direction) {
  validate(p);
  const double n = std::hypot(direction[0], direction[1]);
  if (!(n > 0.0))
    throw Error(ErrorCategory::InvalidInput, "direction must be nonzero");
  direction = {direction[0] / n, direction[1] / n};
  const double kscale = std::max(p.k1, p.k2);
  auto family = [&](double s) {
    const ModelParams q =
        p.with_k(p.k1 + s * direction[0], p.k2 + s * direction[1]);
    return jacobian(q, coexistence_equilibrium(q));
  };
  const double lambda_scale =
      std::abs(critical_eigenvalue(eigenvalues(family(0.0))));
  return transversality_of(family, 1e-6 * kscale,
                           1e-6 * lambda_scale / kscale);
}

std::string_view to_string(HopfType t) {
  switch (t) {
    case HopfType::Subcritical: return "subcritical";
    case HopfType::Supercritical: return "supercritical";
    case HopfType::Degenerate: return "degenerate";
  }
  return "?";
}

HopfType classify_hopf(double l1, const ToleranceSettings& tol) {
  if (l1 > tol.lyapunov_zero) return HopfType::Subcritical;
  if (l1 < -tol.lyapunov_zero) return HopfType::Supercritical;
  return HopfType::Degenerate;
}

HopfType classify_hopf(const ModelParams& p, const ToleranceSettings& tol) {
  return classify_hopf(lyapunov_l1(p, {}, tol).l1, tol);
}

}  // namespace hpbif
