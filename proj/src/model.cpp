#include "hpbif/model.hpp"

#include <cmath>
#include <sstream>

#include "hpbif/errors.hpp"

namespace hpbif {

namespace {

void require_finite(const State& x, std::string_view what) {
  if (!all_finite(x)) {
    throw Error(ErrorCategory::InvalidInput,
                std::string(what) + " has a non-finite component");
  }
}

struct Common {
  double one_minus_inv_R1;
  double one_minus_inv_R2;
  double denom;  // alpha1^2 phi1 phi2 + mu1^2 c1 c2 k1 k2
};

Common common_terms(const ModelParams& p) {
  const auto r = reproduction_numbers(p);
  return {1.0 - 1.0 / r.R1, 1.0 - 1.0 / r.R2,
          p.alpha1 * p.alpha1 * p.phi1 * p.phi2 +
              p.mu1 * p.mu1 * p.c1 * p.c2 * p.k1 * p.k2};
}

}  // namespace

double& ModelParams::field(std::size_t i) {
  switch (i) {
    case 0: return alpha1;
    case 1: return beta1;
    case 2: return mu1;
    case 3: return phi1;
    case 4: return c1;
    case 5: return k1;
    case 6: return alpha2;
    case 7: return beta2;
    case 8: return mu2;
    case 9: return phi2;
    case 10: return c2;
    case 11: return k2;
  }
  throw Error(ErrorCategory::InvalidInput, "parameter index out of range");
}

double ModelParams::field(std::size_t i) const {
  return const_cast<ModelParams&>(*this).field(i);
}

void validate(const ModelParams& p) {
  for (std::size_t i = 0; i < ModelParams::field_names.size(); ++i) {
    const double v = p.field(i);
    if (!std::isfinite(v) || v <= 0.0) {
      std::ostringstream os;
      os << "parameter " << ModelParams::field_names[i]
         << " must be positive and finite (got " << v << ")";
      throw Error(ErrorCategory::InvalidInput, os.str());
    }
  }
}

std::string_view to_string(EquilibriumId id) {
  switch (id) {
    case EquilibriumId::A1: return "A1";
    case EquilibriumId::A2: return "A2";
    case EquilibriumId::A3: return "A3";
    case EquilibriumId::A4: return "A4";
  }
  return "?";
}

State vector_field(const ModelParams& p, const State& x) {
  require_finite(x, "state");
  const double P = x[kP], M = x[kM], L = x[kL], G = x[kG];
  return {p.phi1 * (1.0 - M / p.c1) * M - (p.alpha1 + p.beta1) * P -
              p.k1 * P * G,
          p.alpha1 * P - p.mu1 * M,
          p.phi2 * (1.0 - G / p.c2) * G - (p.alpha2 + p.beta2) * L +
              p.k2 * P * G,
          p.alpha2 * L - p.mu2 * G};
}

Mat4 jacobian(const ModelParams& p, const State& x) {
  require_finite(x, "state");
  const double P = x[kP], M = x[kM], G = x[kG];
  return Mat4::from_rows({
      {-p.alpha1 - p.beta1 - p.k1 * G, p.phi1 - 2.0 * p.phi1 * M / p.c1, 0.0,
       -p.k1 * P},
      {p.alpha1, -p.mu1, 0.0, 0.0},
      {p.k2 * G, 0.0, -p.alpha2 - p.beta2,
       p.phi2 - 2.0 * p.phi2 * G / p.c2 + p.k2 * P},
      {0.0, 0.0, p.alpha2, -p.mu2},
  });
}

ReproductionNumbers reproduction_numbers(const ModelParams& p) {
  return {p.alpha1 * p.phi1 / (p.mu1 * (p.alpha1 + p.beta1)),
          p.alpha2 * p.phi2 / (p.mu2 * (p.alpha2 + p.beta2))};
}

double k1_max(const ModelParams& p) {
  const auto r = reproduction_numbers(p);
  if (!(r.R1 > 1.0) || !(r.R2 > 1.0)) {
    std::ostringstream os;
    os << "k1_max needs R1 > 1 and R2 > 1 (R1 = " << r.R1 << ", R2 = " << r.R2
       << ")";
    throw Error(ErrorCategory::Domain, os.str());
  }
  return p.alpha1 * p.phi1 * (1.0 - 1.0 / r.R1) /
         (p.c2 * p.mu1 * (1.0 - 1.0 / r.R2));
}

State coexistence_equilibrium(const ModelParams& p) {
  const auto c = common_terms(p);
  // Host and parasitoid brackets shared by P4, M4 and L4, G4.
  const double host = p.alpha1 * p.phi1 * c.one_minus_inv_R1 -
                      p.mu1 * p.c2 * p.k1 * c.one_minus_inv_R2;
  const double para = p.c1 * p.mu1 * p.k2 * c.one_minus_inv_R1 +
                      p.alpha1 * p.phi2 * c.one_minus_inv_R2;
  State a4{p.c1 * p.mu1 * p.phi2 / c.denom * host,
           p.c1 * p.alpha1 * p.phi2 / c.denom * host,
           p.c2 * p.mu2 * p.alpha1 * p.phi1 / (p.alpha2 * c.denom) * para,
           p.c2 * p.alpha1 * p.phi1 / c.denom * para};
  require_finite(a4, "equilibrium A4");
  return a4;
}

EquilibriumSet equilibria(const ModelParams& p) {
  const auto c = common_terms(p);
  const State a2{p.c1 * p.mu1 / p.alpha1 * c.one_minus_inv_R1,
                 p.c1 * c.one_minus_inv_R1, 0.0, 0.0};
  const State a3{0.0, 0.0, p.c2 * p.mu2 / p.alpha2 * c.one_minus_inv_R2,
                 p.c2 * c.one_minus_inv_R2};
  require_finite(a2, "equilibrium A2");
  require_finite(a3, "equilibrium A3");
  return {{{{EquilibriumId::A1, State{}},
            {EquilibriumId::A2, a2},
            {EquilibriumId::A3, a3},
            {EquilibriumId::A4, coexistence_equilibrium(p)}}}};
}

Admissibility is_admissible(const ModelParams& p) {
  Admissibility out;
  const auto r = reproduction_numbers(p);
  if (!(r.R1 > 1.0)) out.violations.push_back("R1 <= 1");
  if (!(r.R2 > 1.0)) out.violations.push_back("R2 <= 1");
  if (!(p.k1 > 0.0)) out.violations.push_back("k1 <= 0");
  if (!(p.k2 > 0.0)) out.violations.push_back("k2 <= 0");
  if (!(p.k2 <= p.k1)) out.violations.push_back("k2 > k1");
  if (r.R1 > 1.0 && r.R2 > 1.0 && !(p.k1 < k1_max(p))) {
    std::ostringstream os;
    os << "k1 >= k1_max (" << k1_max(p) << ")";
    out.violations.push_back(os.str());
  }
  out.admissible = out.violations.empty();
  return out;
}

std::vector<std::string> negative_components(const State& x) {
  static constexpr std::array<std::string_view, 4> names{"P", "M", "L", "G"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < 4; ++i)
    if (x[i] < 0.0) out.emplace_back(names[i]);
  return out;
}

}  // namespace hpbif
