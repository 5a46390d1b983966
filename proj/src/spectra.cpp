#include "hpbif/spectra.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "hpbif/errors.hpp"

namespace hpbif {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct LU {
  CMat4 a;
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  int sign = 1;
  std::array<double, 4> pivot_abs{};
};

/// Partial-pivoting LU. Pivots smaller than `floor` are replaced by `floor`
/// (inverse iteration solves with an exactly singular matrix).
LU factor(CMat4 a, double floor = 0.0) {
  LU lu;
  for (std::size_t k = 0; k < 4; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < 4; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (piv != k) {
      std::swap(a.a[piv], a.a[k]);
      std::swap(lu.perm[piv], lu.perm[k]);
      lu.sign = -lu.sign;
    }
    lu.pivot_abs[k] = std::abs(a(k, k));
    if (std::abs(a(k, k)) < floor) a(k, k) = floor;
    if (a(k, k) == cplx(0.0)) continue;
    for (std::size_t i = k + 1; i < 4; ++i) {
      a(i, k) /= a(k, k);
      for (std::size_t j = k + 1; j < 4; ++j) a(i, j) -= a(i, k) * a(k, j);
    }
  }
  lu.a = a;
  return lu;
}

CVec4 lu_solve(const LU& lu, const CVec4& b) {
  CVec4 x;
  for (std::size_t i = 0; i < 4; ++i) x[i] = b[lu.perm[i]];
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu.a(i, j) * x[j];
  for (std::size_t ii = 4; ii-- > 0;) {
    for (std::size_t j = ii + 1; j < 4; ++j) x[ii] -= lu.a(ii, j) * x[j];
    x[ii] /= lu.a(ii, ii);
  }
  return x;
}

CMat4 shifted(const Mat4& m, cplx shift) {
  CMat4 s = complexify(m);
  for (std::size_t i = 0; i < 4; ++i) s(i, i) -= shift;
  return s;
}

CMat4 conj_transpose(const CMat4& m) {
  CMat4 t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t(i, j) = std::conj(m(j, i));
  return t;
}

CVec4 mat_apply(const CMat4& m, const CVec4& x) {
  CVec4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i] += m(i, j) * x[j];
  return r;
}

/// Eigenvalues of an upper Hessenberg matrix by single-shift complex QR with
/// Wilkinson shifts and deflation.
std::array<cplx, 4> hessenberg_qr(CMat4 h) {
  std::array<cplx, 4> eig{};
  int hi = 3;
  int iter = 0;
  int total = 0;
  constexpr int kMaxTotal = 400;
  while (hi >= 0) {
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    int lo = hi;
    while (lo > 0) {
      const double s = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (std::abs(h(lo, lo - 1)) <= kEps * (s == 0.0 ? 1.0 : s)) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (++total > kMaxTotal) {
      throw Error(ErrorCategory::Convergence,
                  "QR iteration did not converge within the iteration budget");
    }
    ++iter;
    cplx shift;
    if (iter % 11 == 0) {
      // Exceptional shift breaks symmetric stalls.
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1),
                 d = h(hi, hi);
      const cplx half = 0.5 * (a - d);
      const cplx disc = std::sqrt(half * half + b * c);
      const cplx m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
      shift = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
    }
    for (int k = lo; k <= hi; ++k) h(k, k) -= shift;
    std::array<std::pair<double, cplx>, 4> rot{};
    for (int k = lo; k < hi; ++k) {
      const cplx a = h(k, k), b = h(k + 1, k);
      const double r = std::hypot(std::abs(a), std::abs(b));
      double c = 1.0;
      cplx s = 0.0;
      if (r != 0.0) {
        if (std::abs(a) == 0.0) {
          c = 0.0;
          s = std::conj(b) / std::abs(b);
        } else {
          c = std::abs(a) / r;
          s = (a / std::abs(a)) * std::conj(b) / r;
        }
      }
      rot[k] = {c, s};
      for (int j = k; j <= hi; ++j) {
        const cplx x = h(k, j), y = h(k + 1, j);
        h(k, j) = c * x + s * y;
        h(k + 1, j) = -std::conj(s) * x + c * y;
      }
    }
    for (int k = lo; k < hi; ++k) {
      const auto [c, s] = rot[k];
      for (int i = lo; i <= std::min(k + 2, hi); ++i) {
        const cplx x = h(i, k), y = h(i, k + 1);
        h(i, k) = x * c + y * std::conj(s);
        h(i, k + 1) = -x * s + y * c;
      }
    }
    for (int k = lo; k <= hi; ++k) h(k, k) += shift;
  }
  return eig;
}

cplx polish(const QuarticCoefficients& c, cplx z) {
  double best = std::abs(c(z));
  for (int it = 0; it < 12 && best > 0.0; ++it) {
    const cplx d = c.derivative(z);
    if (d == cplx(0.0)) break;
    const cplx next = z - c(z) / d;
    const double r = std::abs(c(next));
    if (!(r < best)) break;
    z = next;
    best = r;
  }
  return z;
}

void sort_spectrum(std::array<cplx, 4>& v) {
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

/// Real-coefficient roots come in conjugate pairs; enforce it exactly.
void pair_conjugates(std::array<cplx, 4>& r) {
  double scale = 1.0;
  for (const auto& z : r) scale = std::max(scale, std::abs(z));
  std::array<bool, 4> done{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(r[i].imag()) <= 64.0 * kEps * scale) {
      r[i] = r[i].real();
      done[i] = true;
    }
  }
  for (;;) {
    std::size_t top = 4;
    for (std::size_t i = 0; i < 4; ++i)
      if (!done[i] && r[i].imag() > 0.0 &&
          (top == 4 || r[i].imag() > r[top].imag()))
        top = i;
    if (top == 4) break;
    std::size_t mate = 4;
    for (std::size_t j = 0; j < 4; ++j)
      if (!done[j] && j != top && r[j].imag() < 0.0 &&
          (mate == 4 || std::abs(r[j] - std::conj(r[top])) <
                            std::abs(r[mate] - std::conj(r[top]))))
        mate = j;
    if (mate == 4) {
      r[top] = r[top].real();
      done[top] = true;
      continue;
    }
    const cplx avg = 0.5 * (r[top] + std::conj(r[mate]));
    r[top] = avg;
    r[mate] = std::conj(avg);
    done[top] = done[mate] = true;
  }
  for (std::size_t i = 0; i < 4; ++i)
    if (!done[i]) r[i] = r[i].real();
}

}  // namespace

double QuarticCoefficients::scale() const {
  return std::max({std::abs(a0), std::abs(a1), std::abs(a2), std::abs(a3),
                   std::abs(a4)});
}

QuarticCoefficients char_poly(const Mat4& m) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  std::array<double, 5> c{};
  c[4] = 1.0;
  Mat4 mk;
  for (int k = 1; k <= 4; ++k) {
    mk = m * mk;
    for (std::size_t i = 0; i < 4; ++i) mk(i, i) += c[4 - k + 1];
    c[4 - k] = -(m * mk).trace() / k;
  }
  return {1.0, c[3], c[2], c[1], c[0]};
}

Spectrum quartic_roots(const QuarticCoefficients& c) {
  if (!(c.a0 != 0.0) || !std::isfinite(c.a0) || !std::isfinite(c.a1) ||
      !std::isfinite(c.a2) || !std::isfinite(c.a3) || !std::isfinite(c.a4)) {
    throw Error(ErrorCategory::InvalidInput,
                "quartic needs finite coefficients with a0 != 0");
  }
  CMat4 companion;
  companion(0, 0) = -c.a1 / c.a0;
  companion(0, 1) = -c.a2 / c.a0;
  companion(0, 2) = -c.a3 / c.a0;
  companion(0, 3) = -c.a4 / c.a0;
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  auto roots = hessenberg_qr(companion);
  for (auto& z : roots) z = polish(c, z);
  pair_conjugates(roots);
  sort_spectrum(roots);
  return {roots};
}

Spectrum eigenvalues(const Mat4& m) {
  if (!all_finite(m))
    throw Error(ErrorCategory::InvalidInput, "matrix has non-finite entries");
  return quartic_roots(char_poly(m));
}

CVec4 normalize(const CVec4& q, Normalization rule) {
  const double n = norm2(q);
  if (!(n > 0.0))
    throw Error(ErrorCategory::Degeneracy, "cannot normalize a zero vector");
  if (rule == Normalization::UnitNorm) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (std::abs(q[i]) > 1e-12 * n) {
        const cplx phase = std::conj(q[i]) / std::abs(q[i]);
        return q * (phase / n);
      }
    }
  } else {
    for (std::size_t i = 4; i-- > 0;) {
      if (std::abs(q[i]) > 1e-12 * n) return q * (1.0 / q[i]);
    }
  }
  throw Error(ErrorCategory::Degeneracy, "no usable component to normalize");
}

namespace {

/// Inverse iteration for a null vector of `a` (already shifted).
CVec4 null_vector(const CMat4& a, double scale, const EigenOptions& opt,
                  std::string_view side) {
  const LU lu = factor(a, kEps * scale);
  int small = 0;
  for (double piv : lu.pivot_abs)
    if (piv <= opt.rank_tol * scale) ++small;
  if (small > 1) {
    std::ostringstream os;
    os << side << " null space has dimension " << small
       << " (eigenvalue not simple)";
    throw Error(ErrorCategory::Degeneracy, os.str());
  }
  CVec4 x{0.5, 0.5, 0.5, 0.5};
  for (int it = 0; it < 8; ++it) {
    x = lu_solve(lu, x);
    x = x / norm2(x);
    const double res = norm2(mat_apply(a, x));
    if (it >= 1 && res <= opt.residual_tol * scale) return x;
  }
  std::ostringstream os;
  os << side << " eigenvector residual did not reach tolerance";
  throw Error(ErrorCategory::Convergence, os.str());
}

}  // namespace

EigenPair eigenpair_at(const Mat4& m, cplx lambda, const EigenOptions& opt) {
  const double scale = std::max(norm_inf(m), std::abs(lambda));
  if (!(scale > 0.0))
    throw Error(ErrorCategory::Degeneracy, "zero matrix has no simple eigenvalue");
  const CMat4 right = shifted(m, lambda);
  CVec4 q;
  if (opt.q_override) {
    q = *opt.q_override;
    const double res = norm2(mat_apply(right, q));
    if (!(res <= 1e-6 * scale * norm2(q))) {
      std::ostringstream os;
      os << "override vector is not an eigenvector (relative residual "
         << res / (scale * norm2(q)) << ")";
      throw Error(ErrorCategory::InvalidInput, os.str());
    }
  } else {
    q = normalize(null_vector(right, scale, opt, "right"), opt.normalization);
  }
  const CMat4 left = conj_transpose(right);  // mᵀ - conj(λ) I
  CVec4 p = null_vector(left, scale, opt, "left");
  const cplx pq = inner(p, q);
  if (std::abs(pq) <= 1e-10 * norm2(p) * norm2(q)) {
    throw Error(ErrorCategory::Degeneracy,
                "left and right eigenvectors are orthogonal (defective "
                "eigenvalue)");
  }
  p = p * (1.0 / std::conj(pq));
  return {lambda, q, p};
}

CVec4 solve(const CMat4& a, const CVec4& rhs) {
  const LU lu = factor(a);
  for (double piv : lu.pivot_abs)
    if (piv == 0.0)
      throw Error(ErrorCategory::Singularity, "matrix is singular");
  CVec4 x = lu_solve(lu, rhs);
  // One step of iterative refinement.
  const CVec4 r = rhs - mat_apply(a, x);
  x += lu_solve(lu, r);
  return x;
}

cplx determinant(const CMat4& a) {
  const LU lu = factor(a);
  cplx d = static_cast<double>(lu.sign);
  for (std::size_t i = 0; i < 4; ++i) d *= lu.a(i, i);
  return d;
}

CVec4 solve_shifted(const Mat4& m, cplx shift, const CVec4& rhs) {
  CMat4 a = shifted(m, shift);
  for (auto& row : a.a)
    for (auto& e : row) e = -e;  // shift·I - m
  const double scale = std::max(norm_inf(m), std::abs(shift));
  const LU lu = factor(a);
  double min_pivot = lu.pivot_abs[0];
  for (double piv : lu.pivot_abs) min_pivot = std::min(min_pivot, piv);
  if (!(min_pivot > 1e-12 * (scale > 0.0 ? scale : 1.0))) {
    const auto spec = eigenvalues(m);
    cplx nearest = spec[0];
    for (const auto& z : spec)
      if (std::abs(z - shift) < std::abs(nearest - shift)) nearest = z;
    std::ostringstream os;
    os << "shift " << shift << " is numerically the eigenvalue " << nearest
       << " of the matrix";
    throw Error(ErrorCategory::Singularity, os.str());
  }
  CVec4 x = lu_solve(lu, rhs);
  const CVec4 r = rhs - mat_apply(a, x);
  x += lu_solve(lu, r);
  return x;
}

}  // namespace hpbif
