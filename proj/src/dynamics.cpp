#include "hpbif/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hpbif/detail/bracket.hpp"
#include "hpbif/hopf.hpp"
#include "hpbif/spectra.hpp"

namespace hpbif {

namespace {

using Vec = std::vector<double>;
using Rhs = std::function<void(const Vec&, Vec&)>;

// Dormand-Prince 5(4) tableau (autonomous, so the nodes c_i are not needed);
// E are the 5th minus 4th order weights.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double A71 = 35.0 / 384, A73 = 500.0 / 1113, A74 = 125.0 / 192,
                 A75 = -2187.0 / 6784, A76 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct StepResult {
  Vec y, f, err;
};

StepResult dopri_step(const Rhs& rhs, const Vec& y, const Vec& k1, double h) {
  const std::size_t n = y.size();
  Vec k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * A21 * k1[i];
  rhs(tmp, k2);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
  rhs(tmp, k3);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
  rhs(tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
  rhs(tmp, k5);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] +
                         A64 * k4[i] + A65 * k5[i]);
  rhs(tmp, k6);
  StepResult r{Vec(n), Vec(n), Vec(n)};
  for (std::size_t i = 0; i < n; ++i)
    r.y[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] +
                         A75 * k5[i] + A76 * k6[i]);
  rhs(r.y, r.f);
  for (std::size_t i = 0; i < n; ++i)
    r.err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                    E6 * k6[i] + E7 * r.f[i]);
  return r;
}

State head(const Vec& y) { return {y[0], y[1], y[2], y[3]}; }

class Dopri5 {
 public:
  Dopri5(Rhs rhs, Vec y0, double t0, double tol)
      : rhs_(std::move(rhs)), tol_(tol), t_(t0), y_(std::move(y0)) {
    f_.resize(y_.size());
    rhs_(y_, f_);
    check_finite(y_, "initial state");
    h_ = initial_step();
  }

  double t() const { return t_; }
  const Vec& y() const { return y_; }
  const Vec& f() const { return f_; }
  double t_prev() const { return t_prev_; }
  const Vec& y_prev() const { return y_prev_; }
  const Vec& f_prev() const { return f_prev_; }
  const IntegratorStats& stats() const { return stats_; }
  const Rhs& rhs() const { return rhs_; }

  /// One accepted step, never past t_limit.
  void step(double t_limit) {
    bool rejected_before = false;
    for (;;) {
      const double remaining = t_limit - t_;
      double h = std::min(h_, remaining);
      // Avoid leaving a sliver for the next step.
      if (remaining - h < 1e-3 * h) h = remaining;
      if (!(h > 16.0 * std::numeric_limits<double>::epsilon() *
                    std::max(1.0, std::abs(t_)))) {
        std::ostringstream os;
        os << "step size underflow at t = " << t_ << " (h = " << h << ")";
        throw IntegrationFailure(os.str(), t_, head(y_));
      }
      StepResult r = dopri_step(rhs_, y_, f_, h);
      const double err = error_norm(r);
      if (err <= 1.0) {
        double fac = err == 0.0 ? 10.0
                                : 0.9 * std::pow(err, -0.17) *
                                      std::pow(err_old_, 0.04);
        fac = std::clamp(fac, 0.2, 10.0);
        if (rejected_before) fac = std::min(fac, 1.0);
        err_old_ = std::max(err, 1e-4);
        t_prev_ = t_;
        y_prev_ = std::move(y_);
        f_prev_ = std::move(f_);
        t_ = (h == remaining) ? t_limit : t_ + h;
        y_ = std::move(r.y);
        f_ = std::move(r.f);
        h_ = h * fac;
        ++stats_.steps;
        stats_.max_error_estimate = std::max(stats_.max_error_estimate, err);
        return;
      }
      ++stats_.rejected;
      rejected_before = true;
      const double fac =
          std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h_ = h * fac;
    }
  }

 private:
  double error_norm(const StepResult& r) const {
    double s = 0.0;
    for (std::size_t i = 0; i < y_.size(); ++i) {
      if (!std::isfinite(r.y[i]) || !std::isfinite(r.err[i]))
        return std::numeric_limits<double>::infinity();
      const double sk =
          tol_ * (1.0 + std::max(std::abs(y_[i]), std::abs(r.y[i])));
      s += (r.err[i] / sk) * (r.err[i] / sk);
    }
    return std::sqrt(s / static_cast<double>(y_.size()));
  }

  double scaled_norm(const Vec& v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double sk = tol_ * (1.0 + std::abs(y_[i]));
      s += (v[i] / sk) * (v[i] / sk);
    }
    return std::sqrt(s / static_cast<double>(v.size()));
  }

  // Hairer's starting step heuristic.
  double initial_step() const {
    const double d0 = scaled_norm(y_), d1 = scaled_norm(f_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    Vec y1(y_.size()), f1(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) y1[i] = y_[i] + h0 * f_[i];
    rhs_(y1, f1);
    Vec df(y_.size());
    for (std::size_t i = 0; i < y_.size(); ++i) df[i] = f1[i] - f_[i];
    const double d2 = scaled_norm(df) / h0;
    const double m = std::max(d1, d2);
    const double h1 =
        m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    return std::min(100.0 * h0, h1);
  }

  static void check_finite(const Vec& v, const char* what) {
    for (double x : v)
      if (!std::isfinite(x))
        throw Error(ErrorCategory::InvalidInput,
                    std::string("non-finite ") + what);
  }

  Rhs rhs_;
  double tol_;
  double t_;
  Vec y_, f_;
  double t_prev_ = 0.0;
  Vec y_prev_, f_prev_;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  IntegratorStats stats_;
};

/// Cubic Hermite interpolation of the first `n` components over the last step.
Vec hermite(const Dopri5& s, double t, std::size_t n) {
  const double h = s.t() - s.t_prev();
  const double th = (t - s.t_prev()) / h;
  const double th2 = th * th, th3 = th2 * th;
  const double h00 = 2 * th3 - 3 * th2 + 1, h10 = th3 - 2 * th2 + th;
  const double h01 = -2 * th3 + 3 * th2, h11 = th3 - th2;
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = h00 * s.y_prev()[i] + h10 * h * s.f_prev()[i] +
             h01 * s.y()[i] + h11 * h * s.f()[i];
  return out;
}

Rhs state_rhs(const AutonomousSystem& sys) {
  return [&sys](const Vec& y, Vec& dy) {
    const Vec4 f = sys.field(head(y));
    for (std::size_t i = 0; i < 4; ++i) dy[i] = f[i];
  };
}

/// State plus the row-major fundamental matrix Φ with Φ' = J(x)Φ.
Rhs variational_rhs(const AutonomousSystem& sys) {
  return [&sys](const Vec& y, Vec& dy) {
    const State x = head(y);
    const Vec4 f = sys.field(x);
    const Mat4 j = sys.jacobian(x);
    for (std::size_t i = 0; i < 4; ++i) {
      dy[i] = f[i];
      for (std::size_t c = 0; c < 4; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += j(i, k) * y[4 + 4 * k + c];
        dy[4 + 4 * i + c] = s;
      }
    }
  };
}

Vec variational_start(const State& x) {
  Vec y(20, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    y[i] = x[i];
    y[4 + 5 * i] = 1.0;
  }
  return y;
}

Mat4 fundamental(const Vec& y) {
  Mat4 m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = y[4 + 4 * i + j];
  return m;
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw Error(ErrorCategory::InvalidInput, "integrator tolerance must be > 0");
}

struct ReturnPoint {
  double time = 0.0;
  State x{};
  Mat4 phi;
  Vec4 field{};
};

/// First crossing of n·(x - c) = 0 from below after t_min, landed on the
/// section by re-stepping from the last accepted point.
std::optional<ReturnPoint> first_return(const AutonomousSystem& sys,
                                        const State& x0, const Vec4& normal,
                                        const State& center, double t_min,
                                        double t_max, double tol) {
  Dopri5 ode(variational_rhs(sys), variational_start(x0), 0.0, tol);
  auto side = [&](const Vec& y) { return dot(normal, head(y) - center); };
  while (ode.t() < t_max) {
    ode.step(t_max);
    const double s0 = side(ode.y_prev()), s1 = side(ode.y());
    if (!(ode.t() > t_min && s0 < 0.0 && s1 >= 0.0)) continue;

    auto g = [&](double t) {
      const Vec x = hermite(ode, t, 4);
      return dot(normal, head(x) - center);
    };
    double te = detail::bracketed_root(g, ode.t_prev(), ode.t(), s0, s1,
                                       1e-15 * std::max(1.0, ode.t()));
    StepResult r;
    for (int it = 0; it < 4; ++it) {
      r = dopri_step(ode.rhs(), ode.y_prev(), ode.f_prev(), te - ode.t_prev());
      const double rate = dot(normal, Vec4{r.f[0], r.f[1], r.f[2], r.f[3]});
      const double dt = -side(r.y) / rate;
      te += dt;
      if (std::abs(dt) <= 1e-15 * std::max(1.0, te)) break;
    }
    r = dopri_step(ode.rhs(), ode.y_prev(), ode.f_prev(), te - ode.t_prev());
    ReturnPoint out;
    out.time = te;
    out.x = head(r.y);
    out.phi = fundamental(r.y);
    out.field = sys.field(out.x);
    return out;
  }
  return std::nullopt;
}

/// Solves m·x = b for 3×3 m; false when singular.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3>& b) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0 || !std::isfinite(m[piv][c])) return false;
    std::swap(m[piv], m[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 3; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int c = 2; c >= 0; --c) {
    for (int k = c + 1; k < 3; ++k) b[c] -= m[c][k] * b[k];
    b[c] /= m[c][c];
  }
  return true;
}

/// Orthonormal basis of the complement of `n`.
std::array<Vec4, 3> complement_basis(const Vec4& n) {
  const Vec4 u = (1.0 / norm2(n)) * n;
  std::array<Vec4, 4> cand{Vec4::unit(0), Vec4::unit(1), Vec4::unit(2),
                           Vec4::unit(3)};
  // Prefer axes least aligned with the normal.
  std::sort(cand.begin(), cand.end(), [&](const Vec4& a, const Vec4& b) {
    return std::abs(dot(a, u)) < std::abs(dot(b, u));
  });
  std::array<Vec4, 3> basis;
  for (std::size_t k = 0; k < 3; ++k) {
    Vec4 v = cand[k] - dot(cand[k], u) * u;
    for (std::size_t j = 0; j < k; ++j) v -= dot(v, basis[j]) * basis[j];
    basis[k] = (1.0 / norm2(v)) * v;
  }
  return basis;
}

/// q e^{iθ} with real and imaginary parts orthogonal.
CVec4 rotate_orthogonal(const CVec4& q) {
  const Vec4 a = real_part(q), b = imag_part(q);
  const double theta =
      0.5 * std::atan2(-2.0 * dot(a, b), dot(a, a) - dot(b, b));
  return std::polar(1.0, theta) * q;
}

cplx trivial_multiplier(const std::array<cplx, 4>& mu, std::size_t* index) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i)
    if (std::abs(mu[i] - 1.0) < std::abs(mu[best] - 1.0)) best = i;
  if (index) *index = best;
  return mu[best];
}

}  // namespace

AutonomousSystem model_system(const ModelParams& p) {
  validate(p);
  return {[p](const Vec4& x) { return vector_field(p, x); },
          [p](const Vec4& x) { return jacobian(p, x); }};
}

Trajectory integrate(const AutonomousSystem& sys, const State& x0,
                     double t_end, double tol, double sample_dt) {
  check_tol(tol);
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw Error(ErrorCategory::InvalidInput, "t_end must be positive");
  if (sample_dt < 0.0 || !std::isfinite(sample_dt))
    throw Error(ErrorCategory::InvalidInput, "sample spacing must be >= 0");

  Dopri5 ode(state_rhs(sys), Vec(x0.begin(), x0.end()), 0.0, tol);
  Trajectory tr;
  tr.t.push_back(0.0);
  tr.x.push_back(x0);
  std::size_t next = 1;
  while (ode.t() < t_end) {
    ode.step(t_end);
    if (sample_dt == 0.0) {
      tr.t.push_back(ode.t());
      tr.x.push_back(head(ode.y()));
      continue;
    }
    for (;; ++next) {
      const double ts = static_cast<double>(next) * sample_dt;
      if (ts > ode.t() || ts >= t_end) break;
      tr.t.push_back(ts);
      tr.x.push_back(head(hermite(ode, ts, 4)));
    }
    if (ode.t() == t_end) {
      tr.t.push_back(t_end);
      tr.x.push_back(head(ode.y()));
    }
  }
  tr.stats = ode.stats();
  return tr;
}

Trajectory integrate(const ModelParams& p, const State& x0, double t_end,
                     double tol, double sample_dt) {
  const AutonomousSystem sys = model_system(p);
  return integrate(sys, x0, t_end, tol, sample_dt);
}

std::string_view to_string(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::UnstableSaddleCycle: return "unstable-saddle-cycle";
    case OrbitVerdict::Stable: return "stable";
    case OrbitVerdict::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

OrbitVerdict classify_multipliers(const std::array<cplx, 4>& mu, double band) {
  std::size_t trivial = 0;
  trivial_multiplier(mu, &trivial);
  int outside = 0, inside = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i == trivial) continue;
    const double m = std::abs(mu[i]);
    if (m > 1.0 + band) ++outside;
    else if (m < 1.0 - band) ++inside;
  }
  if (outside == 1) return OrbitVerdict::UnstableSaddleCycle;
  if (inside == 3) return OrbitVerdict::Stable;
  return OrbitVerdict::Indeterminate;
}

std::array<cplx, 4> floquet_multipliers(const AutonomousSystem& sys,
                                        const PeriodicOrbit& orbit,
                                        const ToleranceSettings& tol) {
  if (!(orbit.period > 0.0))
    throw Error(ErrorCategory::InvalidInput, "orbit period must be positive");
  const Vec4 f = sys.field(orbit.anchor);
  const double scale =
      norm_inf(sys.jacobian(orbit.anchor)) * (1.0 + norm2(orbit.anchor));
  if (norm2(f) <= 1e-12 * scale)
    throw Error(ErrorCategory::InvalidInput,
                "anchor is an equilibrium, not a point of a periodic orbit");

  Dopri5 ode(variational_rhs(sys), variational_start(orbit.anchor), 0.0,
             tol.integrator);
  while (ode.t() < orbit.period) ode.step(orbit.period);
  const std::array<cplx, 4> mu = eigenvalues(fundamental(ode.y())).values;
  const cplx one = trivial_multiplier(mu, nullptr);
  if (std::abs(one - 1.0) > 1e-2) {
    std::ostringstream os;
    os << "no Floquet multiplier near 1 (closest " << one
       << "); tighten the integrator tolerance";
    throw Error(ErrorCategory::Accuracy, os.str());
  }
  return mu;
}

std::array<cplx, 4> floquet_multipliers(const ModelParams& p,
                                        const PeriodicOrbit& orbit,
                                        const ToleranceSettings& tol) {
  const AutonomousSystem sys = model_system(p);
  return floquet_multipliers(sys, orbit, tol);
}

PeriodicOrbit find_periodic_orbit(const AutonomousSystem& sys,
                                  const ShootingSetup& setup,
                                  const ToleranceSettings& tol) {
  if (!(setup.omega > 0.0))
    throw Error(ErrorCategory::InvalidInput, "rotation frequency must be > 0");
  if (!(setup.hint_radius > 0.0) || !std::isfinite(setup.hint_radius))
    throw Error(ErrorCategory::Degeneracy,
                "zero hint radius: the cycle has collapsed onto the equilibrium");

  const CVec4 q = rotate_orthogonal(setup.q);
  const Vec4 re = real_part(q);
  // Oriented so that the flow crosses the section upwards at the initial guess.
  Vec4 normal = imag_part(q);
  normal = (1.0 / norm2(normal)) * normal;
  {
    const Vec4 probe = setup.center + (setup.hint_radius / norm2(re)) * re;
    if (dot(normal, sys.field(probe)) < 0.0) normal = -normal;
  }
  const auto basis = complement_basis(normal);
  const State& c = setup.center;
  const double scale = std::max(norm2(c), setup.hint_radius);
  const double period_guess = 2.0 * std::numbers::pi / setup.omega;

  auto lift = [&](const std::array<double, 3>& y) {
    State x = c;
    for (std::size_t k = 0; k < 3; ++k) x += y[k] * basis[k];
    return x;
  };
  auto evaluate = [&](const std::array<double, 3>& y) {
    return first_return(sys, lift(y), normal, c, 0.5 * period_guess,
                        4.0 * period_guess, tol.integrator);
  };
  auto residual = [&](const std::array<double, 3>& y, const ReturnPoint& r) {
    std::array<double, 3> f{};
    for (std::size_t k = 0; k < 3; ++k) f[k] = dot(basis[k], r.x - c) - y[k];
    return f;
  };
  auto norm3 = [](const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };

  std::array<double, 3> y{};
  {
    const State x0 = c + (setup.hint_radius / norm2(re)) * re;
    for (std::size_t k = 0; k < 3; ++k) y[k] = dot(basis[k], x0 - c);
  }
  std::vector<double> history;
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << why << " after " << history.size() << " Newton evaluations";
    if (!history.empty()) os << " (last residual " << history.back() << ")";
    throw ShootingFailure(os.str(), history);
  };

  auto ret = evaluate(y);
  if (!ret) fail("trajectory from the initial guess never returned to the section");
  std::array<double, 3> F = residual(y, *ret);
  double res = norm3(F);
  history.push_back(res);
  const double target = tol.shooting * scale;
  const double acceptable = 100.0 * target;

  for (int it = 0; it < 60 && res > target; ++it) {
    // D(return map) = (I - f nᵀ / (n·f)) Φ, restricted to the section.
    const double nf = dot(normal, ret->field);
    std::array<std::array<double, 3>, 3> J{};
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const Vec4 col = ret->phi * basis[b];
        const Vec4 proj = col - (dot(normal, col) / nf) * ret->field;
        J[a][b] = dot(basis[a], proj) - (a == b ? 1.0 : 0.0);
      }
    std::array<double, 3> step{-F[0], -F[1], -F[2]};
    if (!solve3(J, step)) fail("singular return-map Jacobian");

    bool improved = false;
    for (double lam = 1.0; lam >= 1.0 / 256; lam *= 0.5) {
      std::array<double, 3> y_try{y[0] + lam * step[0], y[1] + lam * step[1],
                                  y[2] + lam * step[2]};
      auto r_try = evaluate(y_try);
      if (!r_try) continue;
      const auto F_try = residual(y_try, *r_try);
      const double res_try = norm3(F_try);
      if (res_try < res) {
        y = y_try;
        ret = r_try;
        F = F_try;
        res = res_try;
        improved = true;
        break;
      }
    }
    history.push_back(res);
    if (!improved) break;
  }
  if (res > acceptable) fail("Newton shooting did not converge");

  PeriodicOrbit orbit;
  orbit.anchor = lift(y);
  orbit.period = ret->time;
  orbit.closure = res;
  orbit.residual_history = history;
  if (norm3(y) <= 1e-6 * scale)
    throw Error(ErrorCategory::Degeneracy,
                "shooting converged to the equilibrium (zero-amplitude cycle)");

  const std::size_t n = std::max<std::size_t>(setup.cycle_samples, 8);
  orbit.cycle = integrate(sys, orbit.anchor, orbit.period, tol.integrator,
                          orbit.period / static_cast<double>(n));
  for (const State& x : orbit.cycle.x)
    orbit.amplitude = std::max(orbit.amplitude, norm2(x - c));
  orbit.multipliers = floquet_multipliers(sys, orbit, tol);
  orbit.verdict = classify_multipliers(orbit.multipliers, tol.floquet_band);
  return orbit;
}

double predicted_cycle_radius(const HopfReport& r) {
  const double gamma = r.lambda.real();
  const double w2 = -gamma / (r.omega0 * r.l1);
  if (gamma == 0.0)
    throw Error(ErrorCategory::Degeneracy,
                "on the Hopf curve the predicted cycle radius is 0");
  if (!(w2 > 0.0) || !std::isfinite(w2)) {
    std::ostringstream os;
    os << "normal form predicts no cycle here (Re lambda = " << gamma
       << ", l1 = " << r.l1 << ")";
    throw Error(ErrorCategory::NotFound, os.str());
  }
  return 2.0 * std::sqrt(w2) * norm2(real_part(rotate_orthogonal(r.q)));
}

double predicted_cycle_radius(const ModelParams& p) {
  HopfOptions opt;
  opt.allow_off_axis = true;
  const HopfReport r = first_lyapunov(expansion_at_A4(p), opt);
  const double band = 1e-8 * norm_inf(jacobian(p, coexistence_equilibrium(p)));
  if (std::abs(r.lambda.real()) <= band)
    throw Error(ErrorCategory::Degeneracy,
                "parameters lie on the Hopf curve: predicted cycle radius is 0");
  return predicted_cycle_radius(r);
}

PeriodicOrbit find_periodic_orbit(const ModelParams& p,
                                  std::optional<double> hint_radius,
                                  const ToleranceSettings& tol) {
  const AutonomousSystem sys = model_system(p);
  HopfOptions opt;
  opt.allow_off_axis = true;
  const HopfReport r = first_lyapunov(expansion_at_A4(p), opt);

  ShootingSetup setup;
  setup.center = coexistence_equilibrium(p);
  setup.q = r.q;
  setup.omega = r.omega0;
  setup.hint_radius = hint_radius ? *hint_radius : predicted_cycle_radius(p);

  // The normal-form radius is only leading order; retry around it.
  std::optional<ShootingFailure> first_failure;
  for (double factor : {1.0, 0.8, 1.25, 0.6, 1.6}) {
    ShootingSetup s = setup;
    s.hint_radius = setup.hint_radius * factor;
    try {
      return find_periodic_orbit(sys, s, tol);
    } catch (const ShootingFailure& e) {
      if (!first_failure) first_failure = e;
      if (hint_radius) break;
    }
  }
  throw *first_failure;
}

}  // namespace hpbif
