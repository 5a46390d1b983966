#include "hpbif/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hpbif/errors.hpp"

namespace hpbif {

RouthHurwitz routh_hurwitz(const QuarticCoefficients& c) {
  if (!(c.a0 > 0.0)) {
    throw Error(ErrorCategory::Domain,
                "Routh-Hurwitz test requires a positive leading coefficient");
  }
  RouthHurwitz r;
  r.delta = c.a1 * c.a2 * c.a3 - c.a0 * c.a3 * c.a3 - c.a1 * c.a1 * c.a4;
  r.positive_coeffs = c.a1 > 0.0 && c.a2 > 0.0 && c.a3 > 0.0 && c.a4 > 0.0;
  r.stable = r.positive_coeffs && r.delta > 0.0;
  return r;
}

QuarticCoefficients a_coefficients(const ModelParams& p) {
  const State a4 = coexistence_equilibrium(p);
  const double P4 = a4[kP], M4 = a4[kM], G4 = a4[kG];
  const auto r = reproduction_numbers(p);

  const double host_trace = p.alpha1 + p.beta1 + p.mu1 + p.k1 * G4;
  const double para_trace = p.alpha2 + p.beta2 + p.mu2;
  const double host_det = p.alpha1 * p.phi1 / p.c1 * M4;
  const double para_det = p.alpha2 * p.phi2 / p.c2 * G4;
  const double coupling = p.alpha2 * p.k1 * p.k2 * P4 * G4;

  QuarticCoefficients c;
  c.a1 = host_trace + para_trace;
  c.a2 = host_det + para_det + host_trace * para_trace;
  c.a3 = host_trace * para_det + para_trace * host_det + coupling;
  // Equivalent to host_det * para_det + mu1 * coupling on the equilibrium.
  c.a4 = p.alpha2 * p.alpha1 * p.phi1 *
         (p.k2 * (1.0 - 1.0 / r.R1) * P4 +
          p.phi2 / p.c1 * (1.0 - 1.0 / r.R2) * M4);
  return c;
}

double delta_at_A4(const ModelParams& p) {
  return routh_hurwitz(a_coefficients(p)).delta;
}

double delta_scale(const QuarticCoefficients& c) {
  return std::abs(c.a1 * c.a2 * c.a3);
}

std::array<double, 2> delta_gradient_k(const ModelParams& p) {
  auto partial = [&](bool along_k1) {
    const double base = along_k1 ? p.k1 : p.k2;
    const double h = 1e-7 * std::max(base, 1e-4);
    auto at = [&](double step) {
      ModelParams q = p;
      (along_k1 ? q.k1 : q.k2) = base + step;
      return delta_at_A4(q);
    };
    const double coarse = (at(h) - at(-h)) / (2.0 * h);
    const double fine = (at(0.5 * h) - at(-0.5 * h)) / h;
    return (4.0 * fine - coarse) / 3.0;
  };
  return {partial(true), partial(false)};
}

BoundarySpectrum boundary_spectra(const ModelParams& p, EquilibriumId which) {
  const auto r = reproduction_numbers(p);
  const double u1 = 1.0 - 1.0 / r.R1;
  const double u2 = 1.0 - 1.0 / r.R2;
  const double s1 = p.alpha1 + p.beta1 + p.mu1;
  const double s2 = p.alpha2 + p.beta2 + p.mu2;

  BoundarySpectrum out;
  std::array<cplx, 4> v{};
  auto fill = [&](double trace, double radicand, std::size_t at) {
    if (radicand >= 0.0) {
      const double s = std::sqrt(radicand);
      v[at] = 0.5 * (-trace + s);
      v[at + 1] = 0.5 * (-trace - s);
      return false;
    }
    const double s = std::sqrt(-radicand);
    v[at] = cplx(-0.5 * trace, 0.5 * s);
    v[at + 1] = cplx(-0.5 * trace, -0.5 * s);
    return true;
  };

  switch (which) {
    case EquilibriumId::A1:
      fill(s1, s1 * s1 + 4.0 * p.alpha1 * p.phi1 * u1, 0);
      fill(s2, s2 * s2 + 4.0 * p.alpha2 * p.phi2 * u2, 2);
      break;
    case EquilibriumId::A2:
      out.complex_subpair =
          fill(s1, s1 * s1 - 4.0 * p.alpha1 * p.phi1 * u1, 0);
      fill(s2,
           s2 * s2 + 4.0 * p.alpha2 * p.phi2 * u2 +
               4.0 * p.c1 * p.alpha2 * p.mu1 / p.alpha1 * u1 * p.k2,
           2);
      break;
    case EquilibriumId::A3: {
      const double shifted = s1 + p.c2 * p.k1 * u2;
      const double skew = p.alpha1 + p.beta1 - p.mu1 + p.c2 * p.k1 * u2;
      fill(shifted, skew * skew + 4.0 * p.alpha1 * p.phi1, 0);
      out.complex_subpair =
          fill(s2, s2 * s2 - 4.0 * p.alpha2 * p.phi2 * u2, 2);
      break;
    }
    case EquilibriumId::A4:
      throw Error(ErrorCategory::InvalidInput,
                  "no closed-form spectrum for A4; use eigenvalues(jacobian)");
  }
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  out.spectrum = {v};
  return out;
}

std::string_view to_string(ClassKind k) {
  switch (k) {
    case ClassKind::AsymptoticallyStable: return "asymptotically-stable";
    case ClassKind::SaddleType: return "saddle";
    case ClassKind::MarginalHopfCandidate: return "marginal-hopf-candidate";
    case ClassKind::Degenerate: return "degenerate";
  }
  return "?";
}

std::string Classification::label() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == ClassKind::SaddleType) os << ' ' << n_negative << '-' << n_positive;
  return os.str();
}

Classification classify_spectrum(const Spectrum& s, double jacobian_norm,
                                 const ToleranceSettings& tol) {
  Classification c;
  c.spectrum = s;
  const double band = tol.axis_band * std::max(jacobian_norm, 1e-300);
  std::vector<cplx> on_axis;
  for (const auto& z : s) {
    if (z.real() > band) {
      ++c.n_positive;
    } else if (z.real() < -band) {
      ++c.n_negative;
    } else {
      ++c.n_axis;
      on_axis.push_back(z);
    }
  }
  if (c.n_axis == 0) {
    c.kind = c.n_positive == 0 ? ClassKind::AsymptoticallyStable
                               : ClassKind::SaddleType;
  } else if (c.n_axis == 2 && c.n_negative == 2 &&
             std::abs(on_axis[0].imag()) > band &&
             std::abs(on_axis[0] - std::conj(on_axis[1])) <= 2.0 * band) {
    c.kind = ClassKind::MarginalHopfCandidate;
  } else {
    c.kind = ClassKind::Degenerate;
    c.diagnostics.push_back("eigenvalues on the imaginary axis do not form a "
                            "single conjugate pair");
  }
  return c;
}

Classification classify(const ModelParams& p, EquilibriumId which,
                        const ToleranceSettings& tol) {
  validate(p);
  const auto r = reproduction_numbers(p);
  if (std::abs(r.R1 - 1.0) <= tol.reproduction_degenerate ||
      std::abs(r.R2 - 1.0) <= tol.reproduction_degenerate) {
    Classification c;
    c.kind = ClassKind::Degenerate;
    c.diagnostics.push_back("R1 or R2 equals 1: equilibria collide");
    return c;
  }
  const State x = equilibria(p)[which];
  const Mat4 j = jacobian(p, x);
  Classification c = classify_spectrum(eigenvalues(j), norm_inf(j), tol);

  if (which == EquilibriumId::A2 || which == EquilibriumId::A3) {
    const auto b = boundary_spectra(p, which);
    c.diagnostics.push_back(b.complex_subpair
                                ? "phi threshold exceeded: complex sub-pair"
                                : "phi threshold not exceeded: real sub-pair");
  }

  if (which == EquilibriumId::A4) {
    const auto coeffs = a_coefficients(p);
    const auto rh = routh_hurwitz(coeffs);
    c.routh = rh;
    const double band = tol.sigma_band * delta_scale(coeffs);
    bool contradiction = false;
    if (rh.positive_coeffs) {
      if (c.kind == ClassKind::AsymptoticallyStable && rh.delta < -band)
        contradiction = true;
      if (c.kind == ClassKind::SaddleType && rh.delta > band)
        contradiction = true;
      if (c.kind == ClassKind::MarginalHopfCandidate &&
          std::abs(rh.delta) > band)
        contradiction = true;
    } else if (c.kind == ClassKind::AsymptoticallyStable) {
      contradiction = true;
    }
    if (contradiction) {
      std::ostringstream os;
      os << "spectrum says " << c.label() << " but Routh-Hurwitz gives delta = "
         << rh.delta << " (band " << band << "); check tolerance settings";
      throw Error(ErrorCategory::Consistency, os.str());
    }
  }
  return c;
}

}  // namespace hpbif
