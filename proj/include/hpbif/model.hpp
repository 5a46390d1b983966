#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "hpbif/linalg.hpp"
#include "hpbif/tolerances.hpp"

namespace hpbif {

/// Rates and capacities of the host-parasitoid compartment model.
///
/// P (pupae) and M (adult hosts) form the host stage pair, L (larvae) and
/// G (adult parasitoids) the parasitoid pair. k1 and k2 are the interaction
/// coefficients that serve as bifurcation parameters, c2 the parasitoid
/// carrying capacity.
struct ModelParams {
  double alpha1 = 0.7;
  double beta1 = 0.003;
  double mu1 = 0.6;
  double phi1 = 2.3;
  double c1 = 400000.0;
  double k1 = 0.00331;
  double alpha2 = 0.3;
  double beta2 = 0.0015;
  double mu2 = 0.4;
  double phi2 = 4.0;
  double c2 = 100.0;
  double k2 = 0.00100;

  /// Field table in declaration order, used for config parsing and bindings.
  static constexpr std::array<std::string_view, 12> field_names{
      "alpha1", "beta1", "mu1", "phi1", "c1", "k1",
      "alpha2", "beta2", "mu2", "phi2", "c2", "k2"};

  double& field(std::size_t i);
  double field(std::size_t i) const;

  ModelParams with_k(double new_k1, double new_k2) const {
    ModelParams p = *this;
    p.k1 = new_k1;
    p.k2 = new_k2;
    return p;
  }
  ModelParams with_c2(double new_c2) const {
    ModelParams p = *this;
    p.c2 = new_c2;
    return p;
  }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// The reference field-data parameter set with the given interaction pair.
inline ModelParams table_parameters(double k1 = 0.00331, double k2 = 0.00100) {
  ModelParams p;
  p.k1 = k1;
  p.k2 = k2;
  return p;
}

/// Population densities (P, M, L, G).
using State = Vec4;

enum Compartment : std::size_t { kP = 0, kM = 1, kL = 2, kG = 3 };

/// Throws InvalidInput unless every field is finite and strictly positive.
void validate(const ModelParams& p);

struct ReproductionNumbers {
  double R1 = 0.0;
  double R2 = 0.0;
};

enum class EquilibriumId { A1 = 1, A2 = 2, A3 = 3, A4 = 4 };

std::string_view to_string(EquilibriumId id);

struct Equilibrium {
  EquilibriumId id;
  State x;
};

struct EquilibriumSet {
  std::array<Equilibrium, 4> points;

  const State& operator[](EquilibriumId id) const {
    return points[static_cast<std::size_t>(id) - 1].x;
  }
};

struct Admissibility {
  bool admissible = false;
  std::vector<std::string> violations;
};

State vector_field(const ModelParams& p, const State& x);

Mat4 jacobian(const ModelParams& p, const State& x);

/// Second derivative of the vector field as a symmetric bilinear form. The
/// model is quadratic, so this is exact and independent of the base point.
template <typename T>
Vector4<T> bilinear_B(const ModelParams& p, const Vector4<T>& x,
                      const Vector4<T>& y) {
  const T cross = x[kP] * y[kG] + x[kG] * y[kP];
  return {-(2.0 * p.phi1 / p.c1) * x[kM] * y[kM] - p.k1 * cross, T(0),
          -(2.0 * p.phi2 / p.c2) * x[kG] * y[kG] + p.k2 * cross, T(0)};
}

/// Third derivative form; identically zero for this model.
template <typename T>
Vector4<T> trilinear_C(const Vector4<T>&, const Vector4<T>&,
                       const Vector4<T>&) {
  return {};
}

ReproductionNumbers reproduction_numbers(const ModelParams& p);

/// Upper bound on k1 keeping the coexistence equilibrium non-negative.
/// Throws Domain when R1 <= 1 or R2 <= 1.
double k1_max(const ModelParams& p);

EquilibriumSet equilibria(const ModelParams& p);

/// The coexistence equilibrium A4 alone.
State coexistence_equilibrium(const ModelParams& p);

Admissibility is_admissible(const ModelParams& p);

/// Names of the compartments of x that are negative (biological positivity
/// diagnostic; the library never clamps).
std::vector<std::string> negative_components(const State& x);

}  // namespace hpbif
