#include "hpbif/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "hpbif/detail/bracket.hpp"
#include "hpbif/errors.hpp"
#include "hpbif/hopf.hpp"
#include "hpbif/stability.hpp"

namespace hpbif {

namespace {

ModelParams at(const ModelParams& base, double k1, double k2, double c2) {
  ModelParams p = base.with_k(k1, k2);
  p.c2 = c2;
  return p;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) /
                            static_cast<double>(n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

/// All sign-change roots of f on a grid, refined.
template <typename F>
std::vector<double> scan_roots(F&& f, const std::vector<double>& grid,
                               double abs_tol) {
  std::vector<double> roots;
  double prev = f(grid[0]);
  if (prev == 0.0) roots.push_back(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = f(grid[i]);
    if (cur == 0.0) {
      roots.push_back(grid[i]);
    } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
      roots.push_back(detail::bracketed_root(f, grid[i - 1], grid[i], prev, cur,
                                             abs_tol));
    }
    prev = cur;
  }
  return roots;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

double delta_of(double k1, double k2, double c2, const ModelParams& base) {
  const ModelParams p = at(base, k1, k2, c2);
  validate(p);
  return delta_at_A4(p);
}

double hopf_polynomial(double k1, double k2, double c2,
                       const ModelParams& base) {
  const ModelParams p = at(base, k1, k2, c2);
  const double d = p.alpha1 * p.alpha1 * p.phi1 * p.phi2 +
                   p.mu1 * p.mu1 * p.c1 * p.c2 * p.k1 * p.k2;
  const double d2 = d * d;
  return -delta_of(k1, k2, c2, base) * d2 * d2;
}

std::optional<CurvePoint> solve_sigma_k2(double k1, double c2,
                                         const ModelParams& base,
                                         const ToleranceSettings& tol) {
  const double kmax = k1_max(base.with_c2(c2));
  if (!(k1 > 0.0 && k1 < kmax)) {
    std::ostringstream os;
    os << "k1 = " << k1 << " outside (0, k1_max = " << kmax << ")";
    throw Error(ErrorCategory::Domain, os.str());
  }
  auto f = [&](double k2) { return delta_of(k1, k2, c2, base); };
  const auto roots = scan_roots(f, log_grid(1e-6 * k1, k1, 256), tol.root_abs);
  if (roots.empty()) return std::nullopt;

  CurvePoint pt;
  pt.k1 = k1;
  pt.k2 = roots.front();
  pt.multiple_roots = roots.size() > 1;
  pt.delta_residual = f(pt.k2);
  const ModelParams p = at(base, k1, pt.k2, c2);
  const auto c = a_coefficients(p);
  pt.omega0 = std::sqrt(c.a3 / c.a1);
  ToleranceSettings loose = tol;
  loose.sigma_band = std::max(tol.sigma_band, 1e-6);
  const double l1 = lyapunov_l1(p, {}, loose).l1;
  pt.l1_sign = (l1 > 0.0) - (l1 < 0.0);
  return pt;
}

std::optional<double> solve_sigma_k1(double k2, double c2,
                                     const ModelParams& base) {
  const double kmax = k1_max(base.with_c2(c2));
  if (!(k2 > 0.0 && k2 < kmax)) return std::nullopt;
  auto f = [&](double k1) { return delta_of(k1, k2, c2, base); };
  const auto roots =
      scan_roots(f, log_grid(k2, kmax * (1.0 - 1e-9), 256), 1e-16);
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

ModelParams reference_hopf_point(const ModelParams& base) {
  const auto k1 = solve_sigma_k1(0.001, base.c2, base);
  if (!k1)
    throw Error(ErrorCategory::NotFound,
                "no Hopf point with k2 = 0.001 for these parameters");
  return base.with_k(*k1, 0.001);
}

std::vector<double> diagonal_roots(double c2, const ModelParams& base) {
  const double kmax = k1_max(base.with_c2(c2));
  auto n = [&](double k) { return delta_of(k, k, c2, base); };
  return scan_roots(n, log_grid(1e-6 * kmax, kmax * (1.0 - 1e-9), 2048),
                    1e-16);
}

std::pair<double, double> diagonal_minimum(double c2, const ModelParams& base) {
  const double kmax = k1_max(base.with_c2(c2));
  auto n = [&](double k) { return delta_of(k, k, c2, base); };
  const auto grid = log_grid(1e-6 * kmax, kmax * (1.0 - 1e-9), 600);
  std::size_t best = 0;
  double best_val = n(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = n(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section refinement between the neighbours of the grid minimum.
  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = n(x1), f2 = n(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-15 * b; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = n(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = n(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  const double fm = n(xm);
  if (fm < best_val) return {fm, xm};
  return {best_val, grid[best]};
}

std::vector<CurvePoint> trace_sigma_at(double c2, std::span<const double> k1s,
                                       const ModelParams& base,
                                       unsigned threads) {
  std::vector<std::optional<CurvePoint>> slots(k1s.size());
  parallel_for(k1s.size(), threads,
               [&](std::size_t i) { slots[i] = solve_sigma_k2(k1s[i], c2, base); });
  std::vector<CurvePoint> out;
  for (auto& s : slots)
    if (s) out.push_back(*s);
  std::sort(out.begin(), out.end(),
            [](const CurvePoint& a, const CurvePoint& b) { return a.k1 < b.k1; });
  return out;
}

std::vector<CurvePoint> trace_sigma(double c2, std::size_t n_points,
                                    const ModelParams& base, unsigned threads) {
  if (n_points < 2)
    throw Error(ErrorCategory::InvalidInput, "trace_sigma needs n >= 2");
  const double kmax = k1_max(base.with_c2(c2));
  // Σ can only enter or leave the admissible set through the diagonal (Δ
  // keeps its sign as k2 -> 0), so the diagonal roots cut (0, k1_max) into
  // pieces on which a root either exists throughout or not at all.
  std::vector<double> cuts{1e-6 * kmax};
  for (double r : diagonal_roots(c2, base)) cuts.push_back(r);
  cuts.push_back(kmax * (1.0 - 1e-9));

  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = std::sqrt(cuts[i] * cuts[i + 1]);
    if (solve_sigma_k2(mid, c2, base)) {
      lo = std::min(lo, cuts[i]);
      hi = std::max(hi, cuts[i + 1]);
    }
  }
  if (!(lo < hi)) return {};

  const double inset = 1e-9 * (hi - lo);
  lo += inset;
  hi -= inset;
  std::vector<double> k1s(n_points);
  for (std::size_t i = 0; i < n_points; ++i)
    k1s[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(n_points - 1);
  return trace_sigma_at(c2, k1s, base, threads);
}

std::array<double, 2> gradient_delta(double k1, double k2, double c2,
                                     const ModelParams& base) {
  return delta_gradient_k(at(base, k1, k2, c2));
}

std::array<double, 2> gradient_hopf_polynomial(double k1, double k2, double c2,
                                               const ModelParams& base) {
  auto partial = [&](bool along_k1) {
    const double k = along_k1 ? k1 : k2;
    const double h = 1e-7 * std::max(k, 1e-4);
    auto f = [&](double s) {
      return along_k1 ? hopf_polynomial(k1 + s, k2, c2, base)
                      : hopf_polynomial(k1, k2 + s, c2, base);
    };
    const double coarse = (f(h) - f(-h)) / (2.0 * h);
    const double fine = (f(0.5 * h) - f(-0.5 * h)) / h;
    return (4.0 * fine - coarse) / 3.0;
  };
  return {partial(true), partial(false)};
}

TangencyResult find_tangency(const ModelParams& base) {
  TangencyResult out;
  auto min_n = [&](double c2) { return diagonal_minimum(c2, base).first; };

  // Two diagonal roots <=> the diagonal minimum of Δ is negative.
  double lo = base.c2, hi = 2.0 * base.c2;
  if (!(min_n(lo) < 0.0)) {
    std::ostringstream os;
    os << "Σ does not cross the diagonal at c2 = " << lo
       << " (diagonal minimum of delta = " << min_n(lo) << ")";
    throw Error(ErrorCategory::NotFound, os.str());
  }
  int expansions = 0;
  while (min_n(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++expansions > 40)
      throw Error(ErrorCategory::NotFound,
                  "no c2 found where Σ leaves the admissible set");
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (min_n(mid) < 0.0 ? lo : hi) = mid;
  }
  double c2 = 0.5 * (lo + hi);
  double k1 = diagonal_minimum(c2, base).second;

  // Newton on N = 0, ∂N/∂k1 = 0 with N(k1, c2) = Δ(k1, k1, c2).
  auto N = [&](double k, double c) { return delta_of(k, k, c, base); };
  auto Nk = [&](double k, double c) {
    const double h = 1e-4 * k;
    return (N(k + h, c) - N(k - h, c)) / (2.0 * h);
  };
  auto residual = [&](double k, double c) {
    return std::hypot(N(k, c), Nk(k, c) * k);
  };
  double res = residual(k1, c2);
  for (int it = 0; it < 8; ++it) {
    const double hk = 1e-3 * k1, hc = 1e-6 * c2;
    const double f1 = N(k1, c2), f2 = Nk(k1, c2);
    const double j11 = (N(k1 + hk, c2) - N(k1 - hk, c2)) / (2.0 * hk);
    const double j12 = (N(k1, c2 + hc) - N(k1, c2 - hc)) / (2.0 * hc);
    const double j21 = (Nk(k1 + hk, c2) - Nk(k1 - hk, c2)) / (2.0 * hk);
    const double j22 = (Nk(k1, c2 + hc) - Nk(k1, c2 - hc)) / (2.0 * hc);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    const double dk = (f1 * j22 - f2 * j12) / det;
    const double dc = (j11 * f2 - j21 * f1) / det;
    const double nk = k1 - dk, nc = c2 - dc;
    const double nres = residual(nk, nc);
    if (!(nres < res)) break;
    k1 = nk;
    c2 = nc;
    res = nres;
  }

  out.c2_star = c2;
  out.k1 = out.k2 = k1;
  out.gradient = gradient_delta(k1, k1, c2, base);
  out.k1_max = k1_max(base.with_c2(c2));
  {
    const double hk = 1e-3 * k1, hc = 1e-6 * c2;
    const double n_kk =
        (N(k1 + hk, c2) - 2.0 * N(k1, c2) + N(k1 - hk, c2)) / (hk * hk);
    const double n_c = (N(k1, c2 + hc) - N(k1, c2 - hc)) / (2.0 * hc);
    out.second_derivative = -n_kk / n_c;
  }
  if (!(out.second_derivative < 0.0))
    out.diagnostics.push_back("second-order condition failed: d2c2/dk1^2 >= 0");
  else
    out.diagnostics.push_back("local maximum of c2 along the diagonal curve");
  out.diagnostics.push_back(
      "maximum checked for uniqueness only on the scanned range (0, k1_max)");
  if (!(out.k1 < out.k1_max))
    out.diagnostics.push_back("tangency point lies outside the admissible set");
  return out;
}

}  // namespace hpbif
