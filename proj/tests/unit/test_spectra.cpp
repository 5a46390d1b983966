#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "hpbif/errors.hpp"
#include "hpbif/spectra.hpp"

using namespace hpbif;

namespace {

Mat4 random_matrix(std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> n(0.0, spread);
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = n(rng);
  return m;
}

Eigen::Matrix4d to_eigen(const Mat4& m) {
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m(i, j);
  return e;
}

/// Largest distance from a root in `a` to its nearest partner in `b`.
double spectrum_distance(const std::array<cplx, 4>& a, std::vector<cplx> b) {
  double worst = 0.0;
  for (const auto& z : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](cplx x, cplx y) {
      return std::abs(x - z) < std::abs(y - z);
    });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_CASE("characteristic polynomial matches the Eigen determinant") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Mat4 m = random_matrix(rng);
    const QuarticCoefficients c = char_poly(m);
    const Eigen::Matrix4d e = to_eigen(m);
    CHECK(c.a0 == 1.0);
    CHECK(c.a1 == doctest::Approx(-e.trace()).epsilon(1e-12).scale(1.0));
    CHECK(c.a4 == doctest::Approx(e.determinant()).epsilon(1e-10).scale(1.0));
    // det(zI - m) at a random point.
    const cplx z(0.37, -1.2);
    const Eigen::Matrix4cd shifted =
        z * Eigen::Matrix4cd::Identity() - e.cast<std::complex<double>>();
    CHECK(std::abs(c(z) - shifted.determinant()) < 1e-10 * (1.0 + std::abs(c(z))));
  }
}

TEST_CASE("eigenvalues agree with the Eigen solver") {
  std::mt19937_64 rng(2);
  for (double spread : {1e-2, 1.0, 1e3}) {
    for (int i = 0; i < 300; ++i) {
      const Mat4 m = random_matrix(rng, spread);
      const Spectrum s = eigenvalues(m);
      Eigen::EigenSolver<Eigen::Matrix4d> es(to_eigen(m));
      std::vector<cplx> oracle(es.eigenvalues().data(), es.eigenvalues().data() + 4);
      CHECK(spectrum_distance(s.values, oracle) <= 1e-8 * spread);
    }
  }
}

TEST_CASE("spectrum is conjugate-closed and sorted") {
  const Mat4 rot = Mat4::from_rows(
      {{0, -2, 0, 0}, {2, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -3}});
  const Spectrum s = eigenvalues(rot);
  CHECK(std::abs(s[0] - cplx(0, 2)) < 1e-14);
  CHECK(std::abs(s[1] - cplx(0, -2)) < 1e-14);
  CHECK(s[0].imag() > 0.0);
  CHECK(s[2].real() == doctest::Approx(-1.0));
  CHECK(s[3].real() == doctest::Approx(-3.0));
}

TEST_CASE("right and left eigenvectors satisfy the pairing") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Mat4 m = random_matrix(rng);
    const Spectrum s = eigenvalues(m);
    for (const cplx& lambda : s) {
      const EigenPair e = eigenpair_at(m, lambda);
      CHECK(norm2(m * e.q - lambda * e.q) <= 1e-9 * norm_inf(m));
      CHECK(norm2(m.transpose() * e.p - std::conj(lambda) * e.p) <=
            1e-9 * norm_inf(m) * norm2(e.p));
      CHECK(std::abs(inner(e.p, e.q) - 1.0) < 1e-12);
      CHECK(norm2(e.q) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("normalization rules") {
  const CVec4 q{0.0, cplx(3, 4), cplx(1, 1), cplx(0, 2)};
  const CVec4 u = normalize(q, Normalization::UnitNorm);
  CHECK(norm2(u) == doctest::Approx(1.0));
  CHECK(u[1].imag() == doctest::Approx(0.0));
  CHECK(u[1].real() > 0.0);
  const CVec4 l = normalize(q, Normalization::LastComponentUnit);
  CHECK(std::abs(l[3] - 1.0) < 1e-15);
  // Zero last component falls back to the previous one.
  const CVec4 f = normalize(CVec4{1.0, cplx(0, 1), 2.0, 0.0},
                            Normalization::LastComponentUnit);
  CHECK(std::abs(f[2] - 1.0) < 1e-15);
  CHECK_THROWS_AS(normalize(CVec4{}, Normalization::UnitNorm), Error);
}

TEST_CASE("override vector is kept and must be an eigenvector") {
  const Mat4 rot = Mat4::from_rows(
      {{0, -2, 0, 0}, {2, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -3}});
  EigenOptions opt;
  opt.q_override = CVec4{cplx(3, 0), cplx(0, -3), 0.0, 0.0};
  const EigenPair e = eigenpair_at(rot, cplx(0, 2), opt);
  CHECK(e.q == *opt.q_override);
  CHECK(std::abs(inner(e.p, e.q) - 1.0) < 1e-14);
  opt.q_override = CVec4{1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(eigenpair_at(rot, cplx(0, 2), opt), Error);
}

TEST_CASE("defective and repeated eigenvalues are reported") {
  const Mat4 jordan = Mat4::from_rows(
      {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -2}});
  try {
    eigenpair_at(jordan, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Degeneracy);
  }
  const Mat4 doubled = Mat4::diagonal({1, 1, -1, -2});
  try {
    eigenpair_at(doubled, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Degeneracy);
  }
}

TEST_CASE("shifted solve") {
  std::mt19937_64 rng(9);
  const Mat4 m = random_matrix(rng);
  const CVec4 b{1.0, cplx(0, 1), -2.0, 0.5};
  const cplx shift(0.3, 2.0);
  const CVec4 x = solve_shifted(m, shift, b);
  CHECK(norm2(shift * x - m * x - b) < 1e-12 * norm2(b) * (1.0 + norm_inf(m)));

  const Mat4 rot = Mat4::from_rows(
      {{0, -2, 0, 0}, {2, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -3}});
  try {
    solve_shifted(rot, cplx(0, 2), b);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Singularity);
  }
}

TEST_CASE("quartic roots of a known polynomial") {
  // (λ² + 1)(λ² + 3λ + 2)
  const QuarticCoefficients c{1.0, 3.0, 3.0, 3.0, 2.0};
  const Spectrum s = quartic_roots(c);
  const std::vector<cplx> want{cplx(0, 1), cplx(0, -1), -1.0, -2.0};
  CHECK(spectrum_distance(s.values, want) < 1e-13);
}
