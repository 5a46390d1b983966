#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "hpbif/continuation.hpp"
#include "hpbif/errors.hpp"
#include "hpbif/model.hpp"
#include "reference_values.hpp"

using namespace hpbif;

namespace {

ModelParams random_admissible(std::mt19937_64& rng) {
  const ModelParams base = table_parameters();
  const double kmax = k1_max(base);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  const double k1 = kmax * u(rng);
  const double k2 = k1 * u(rng);
  return base.with_k(k1, k2);
}

State random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  return {2e4 * u(rng), 2e4 * u(rng), 700.0 * u(rng), 500.0 * u(rng)};
}

}  // namespace

TEST_CASE("reproduction numbers and k1 bound at the field table") {
  const ModelParams p = table_parameters();
  const auto r = reproduction_numbers(p);
  CHECK(std::abs(r.R1 - ref::R1) < 1e-5);
  CHECK(std::abs(r.R2 - ref::R2) < 1e-5);
  CHECK(std::abs(k1_max(p) - ref::k1_max) < 1e-5);
}

TEST_CASE("k1_max needs both thresholds exceeded") {
  ModelParams p = table_parameters();
  p.phi1 = 0.1;
  CHECK(reproduction_numbers(p).R1 < 1.0);
  CHECK_THROWS_AS(k1_max(p), Error);
}

TEST_CASE("every equilibrium is a zero of the vector field") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p = random_admissible(rng);
    for (const auto& e : equilibria(p).points) {
      const Vec4 f = vector_field(p, e.x);
      CHECK(norm2(f) <= 1e-9 * (1.0 + norm2(e.x)));
    }
  }
}

TEST_CASE("A4 is positive across the admissible set") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = random_admissible(rng);
    CHECK(is_admissible(p).admissible);
    const State a4 = coexistence_equilibrium(p);
    CHECK(negative_components(a4).empty());
  }
}

TEST_CASE("admissibility reports violations") {
  const auto a = is_admissible(table_parameters(0.001, 0.002));
  CHECK_FALSE(a.admissible);
  CHECK_FALSE(a.violations.empty());
  CHECK_FALSE(is_admissible(table_parameters(0.03, 0.001)).admissible);
}

TEST_CASE("Jacobian matches central differences") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = random_admissible(rng);
    const State x = random_state(rng);
    const Mat4 j = jacobian(p, x);
    for (std::size_t c = 0; c < 4; ++c) {
      const double h = 1e-5 * std::abs(x[c]);
      const Vec4 e = h * Vec4::unit(c);
      const Vec4 d = (1.0 / (2.0 * h)) * (vector_field(p, x + e) - vector_field(p, x - e));
      for (std::size_t r = 0; r < 4; ++r)
        CHECK(std::abs(d[r] - j(r, c)) <= 1e-7 * (1.0 + norm_inf(j)));
    }
  }
}

TEST_CASE("quadratic Taylor expansion is exact and the cubic term vanishes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = random_admissible(rng);
    const State x = random_state(rng);
    const Vec4 h = 0.1 * random_state(rng);
    const Vec4 lhs = vector_field(p, x + h) - vector_field(p, x);
    const Vec4 rhs = jacobian(p, x) * h + 0.5 * bilinear_B(p, h, h);
    CHECK(norm2(lhs - rhs) <= 1e-10 * (norm2(lhs) + 1.0));

    // Third forward difference of a quadratic map is zero.
    const Vec4 d3 = vector_field(p, x + 3.0 * h) - 3.0 * vector_field(p, x + 2.0 * h) +
                    3.0 * vector_field(p, x + h) - vector_field(p, x);
    CHECK(norm2(d3) <= 1e-9 * norm2(vector_field(p, x + 3.0 * h)) + 1e-6);
    CHECK(norm2(trilinear_C(h, h, h)) == 0.0);
  }
}

TEST_CASE("B is symmetric and bilinear over complex vectors") {
  const ModelParams p = table_parameters();
  const CVec4 a{cplx(1, 2), cplx(-3, 1), cplx(0.5, 0), cplx(2, -1)};
  const CVec4 b{cplx(0, 1), cplx(4, 0), cplx(-1, 2), cplx(1, 1)};
  const cplx s(0.3, -1.7);
  CHECK(norm2(bilinear_B(p, a, b) - bilinear_B(p, b, a)) < 1e-12);
  CHECK(norm2(bilinear_B(p, s * a, b) - s * bilinear_B(p, a, b)) < 1e-12);
}

TEST_CASE("printed equilibrium belongs to the solved Hopf point") {
  const State printed{ref::A4[0], ref::A4[1], ref::A4[2], ref::A4[3]};
  const ModelParams exact = reference_hopf_point();
  CHECK(norm2(vector_field(exact, printed)) < 1e-6 * norm2(printed));
  // At the rounded point it is only a 2e-3 approximation.
  const ModelParams rounded = table_parameters(ref::q_k1, ref::q_k2);
  const double res = norm2(vector_field(rounded, printed)) / norm2(printed);
  CHECK(res > 1e-3);
  CHECK(res < 3e-3);
  CHECK(norm2(vector_field(rounded, coexistence_equilibrium(rounded))) <
        1e-9 * norm2(printed));
}

TEST_CASE("invalid parameters and states are rejected") {
  ModelParams p = table_parameters();
  p.alpha1 = -1.0;
  CHECK_THROWS_AS(validate(p), Error);
  p = table_parameters();
  p.c2 = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate(p), Error);
  const State bad{1.0, std::numeric_limits<double>::infinity(), 1.0, 1.0};
  CHECK_THROWS_AS(jacobian(table_parameters(), bad), Error);
}

TEST_CASE("parameter fields are addressable by name") {
  ModelParams p;
  for (std::size_t i = 0; i < ModelParams::field_names.size(); ++i) p.field(i) = 1.0 + i;
  CHECK(p.alpha1 == 1.0);
  CHECK(p.k2 == 12.0);
}
