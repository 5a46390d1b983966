// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hpbif/continuation.hpp"
#include "hpbif/dynamics.hpp"
#include "hpbif/errors.hpp"
#include "hpbif/hopf.hpp"
#include "hpbif/model.hpp"
#include "hpbif/stability.hpp"
#include "planted.hpp"
#include "reference_values.hpp"

using namespace hpbif;

namespace {

/// Collects the reasons a criterion failed; an empty list means pass.
struct Check {
  std::vector<std::string> failures;
  std::ostringstream info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream os;
      os.precision(10);
      os << what << ": got " << got << ", want " << want << " ± " << tol;
      failures.push_back(os.str());
    }
  }
};

int n_failed = 0;
int n_known = 0;
std::vector<int> known_failures;

void criterion(int id, const char* title, const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  const bool ok = c.failures.empty();
  const bool known =
      std::find(known_failures.begin(), known_failures.end(), id) != known_failures.end();
  if (!ok) ++(known ? n_known : n_failed);
  std::printf("[%s] %2d: %s", ok ? "PASS" : "FAIL", id, title);
  if (!ok && known) std::printf(" [known]");
  if (!c.info.str().empty()) std::printf(" (%s)", c.info.str().c_str());
  std::printf("\n");
  for (const auto& f : c.failures) std::printf("        %s\n", f.c_str());
  std::fflush(stdout);
}

Eigen::Matrix4d to_eigen(const Mat4& m) {
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e(i, j) = m(i, j);
  return e;
}

/// Largest distance between two spectra after greedy matching.
double spectrum_distance(const Spectrum& s, const Eigen::Vector4cd& oracle) {
  std::vector<cplx> pool(oracle.data(), oracle.data() + 4);
  double worst = 0.0;
  for (const auto& z : s) {
    auto it = std::min_element(pool.begin(), pool.end(), [&](cplx a, cplx b) {
      return std::abs(a - z) < std::abs(b - z);
    });
    worst = std::max(worst, std::abs(*it - z));
    pool.erase(it);
  }
  return worst;
}

/// Parameters at distance `e` from the Hopf point along the unit Δ-gradient.
struct OffCurve {
  ModelParams hopf = reference_hopf_point();
  std::array<double, 2> dir;
  OffCurve() {
    const auto g = delta_gradient_k(hopf);
    const double n = std::hypot(g[0], g[1]);
    dir = {g[0] / n, g[1] / n};
  }
  ModelParams at(double e) const {
    return hopf.with_k(hopf.k1 + e * dir[0], hopf.k2 + e * dir[1]);
  }
  double gamma(double e) const {
    HopfOptions o;
    o.allow_off_axis = true;
    return first_lyapunov(expansion_at_A4(at(e)), o).lambda.real();
  }
  /// Distance where the real part of the critical pair equals `target` (< 0).
  double distance_for(double target) const {
    double lo = 0.0, hi = 1e-6;
    while (gamma(hi) > target) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (gamma(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

QuarticCoefficients from_roots(const std::array<cplx, 4>& r) {
  std::array<cplx, 5> c{1.0, 0.0, 0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t j = k + 1; j-- > 0;) c[j + 1] -= r[k] * c[j];
  return {1.0, c[1].real(), c[2].real(), c[3].real(), c[4].real()};
}

}  // namespace

/// `--known-failure N` (repeatable) marks a criterion whose failure is
/// documented; it still prints FAIL but does not change the exit status.
int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string(argv[i]) != "--known-failure") {
      std::fprintf(stderr, "usage: acceptance [--known-failure N]...\n");
      return 2;
    }
    known_failures.push_back(std::atoi(argv[i + 1]));
  }
  const ModelParams table = table_parameters();
  const ModelParams q_point = reference_hopf_point();

  criterion(1, "reproduction numbers and k1 bound", [&](Check& c) {
    const auto r = reproduction_numbers(table);
    c.near(r.R1, ref::R1, 1e-5, "R1");
    c.near(r.R2, ref::R2, 1e-5, "R2");
    c.near(k1_max(table), ref::k1_max, 1e-5, "k1_max");
  });

  criterion(2, "coexistence equilibrium at the Hopf point", [&](Check& c) {
    const State a4 = coexistence_equilibrium(q_point);
    for (std::size_t i = 0; i < 4; ++i)
      c.near(a4[i], ref::A4[i], 1e-6 * ref::A4[i], "A4 component " + std::to_string(i));
    const State printed{ref::A4[0], ref::A4[1], ref::A4[2], ref::A4[3]};
    const double res = norm2(vector_field(q_point, printed)) / norm2(printed);
    c.expect(res < 1e-3, "printed A4 residual");
    const double rounded = norm2(vector_field(table, printed)) / norm2(printed);
    c.info << "k1 = " << q_point.k1 << ", residual " << res
           << ", at k1 = 0.00331: " << rounded;
  });

  criterion(3, "spectrum at the Hopf point", [&](Check& c) {
    const Mat4 j = jacobian(q_point, coexistence_equilibrium(q_point));
    const Spectrum s = eigenvalues(j);
    const Eigen::Vector4cd oracle = Eigen::EigenSolver<Eigen::Matrix4d>(to_eigen(j)).eigenvalues();
    const Spectrum want{{cplx(ref::real_eigs[0]), cplx(ref::real_eigs[1]),
                         cplx(0.0, ref::omega0), cplx(0.0, -ref::omega0)}};
    Eigen::Vector4cd want_e;
    for (int i = 0; i < 4; ++i) want_e[i] = want[i];
    c.expect(spectrum_distance(s, want_e) <= 1e-4, "eigenvalues vs printed");
    c.expect(spectrum_distance(s, oracle) <= 1e-10 * 4.0, "eigenvalues vs Eigen");
    double pair = 0.0;
    for (int i = 0; i < 4; ++i) pair = std::max(pair, oracle[i].imag());
    c.near(omega0_at(q_point), pair, 1e-6, "sqrt(a3/a1) vs solver");
  });

  criterion(4, "first Lyapunov coefficient at the Hopf point", [&](Check& c) {
    HopfOptions o;
    o.q_override = ref::q;
    const HopfReport r = lyapunov_l1(q_point, o);
    c.near(r.G21.real(), ref::G21.real(), 1e-4, "Re G21");
    c.near(r.G21.imag(), ref::G21.imag(), 1e-4, "Im G21");
    c.near(r.l1_unit_frequency, ref::l1_printed, 1e-3 * ref::l1_printed,
           "l1 (unit frequency)");
    c.near(r.l1, r.G21.real() / (2.0 * r.omega0), 1e-15, "l1 = Re G21 / 2w");
    const HopfReport d = lyapunov_l1(q_point);
    c.expect(d.l1 > 0.0, "default normalization l1 > 0");
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> mag(-3.0, 3.0), ph(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 20; ++i) {
      HopfOptions s;
      s.q_override = std::polar(std::pow(10.0, mag(rng)), ph(rng)) * d.q;
      c.expect(lyapunov_l1(q_point, s).l1 > 0.0, "sign under rescaling " + std::to_string(i));
    }
    c.info << "Re G21/(2w) = " << r.l1 << ", /w^2 = " << r.l1_unit_frequency;
  });

  criterion(5, "Hopf curve table", [&](Check& c) {
    double worst_k2 = 0.0, worst_omega = 0.0;
    for (const auto& row : ref::sigma_table) {
      const auto pt = solve_sigma_k2(row.k1, table.c2, table);
      char tag_buf[32];
      std::snprintf(tag_buf, sizeof tag_buf, "k1 = %.7f", row.k1);
      const std::string tag = tag_buf;
      if (!pt) {
        c.expect(false, tag + ": no root");
        continue;
      }
      worst_k2 = std::max(worst_k2, std::abs(pt->k2 - row.k2));
      worst_omega = std::max(worst_omega, std::abs(pt->omega0 - row.omega));
      c.near(pt->k2, row.k2, 1e-7, tag + " k2");
      c.near(pt->omega0, row.omega, 1e-4, tag + " omega");
      c.expect(pt->l1_sign > 0, tag + " l1 sign");
    }
    c.info << "max |dk2| = " << worst_k2 << ", max |domega| = " << worst_omega;
  });

  criterion(6, "tangency of the Hopf curve with the diagonal", [&](Check& c) {
    const TangencyResult t = find_tangency(table);
    c.near(t.c2_star, ref::c2_star, 1e-2, "c2*");
    c.near(t.k1, ref::tangency_k, 1e-5, "T k1");
    c.near(t.k2, ref::tangency_k, 1e-5, "T k2");
    const auto g = gradient_delta(t.k1, t.k2, t.c2_star, table);
    const double dot = std::abs(-g[0] + g[1]) / (std::hypot(g[0], g[1]) * std::sqrt(2.0));
    c.expect(dot >= 0.999, "gradient parallel to (-1, 1)");
    c.near(t.k1_max, ref::tangency_k1_max, 1e-5, "k1_max(c2*)");
    c.expect(trace_sigma(700.0, 50, table).empty(), "empty curve at c2 = 700");
    c.info << "c2* = " << t.c2_star << ", |cos| = " << dot;
  });

  criterion(7, "boundary equilibria classification on random admissible k", [&](Check& c) {
    std::mt19937_64 rng(2107);
    std::uniform_real_distribution<double> u(1e-4, 1.0 - 1e-4);
    int done = 0;
    while (done < 100) {
      const double k1 = k1_max(table) * u(rng);
      const ModelParams p = table.with_k(k1, k1 * u(rng));
      if (!is_admissible(p).admissible) continue;
      ++done;
      const auto eq = equilibria(p);
      const std::pair<EquilibriumId, const char*> want[] = {
          {EquilibriumId::A1, "saddle 2-2"},
          {EquilibriumId::A2, "saddle 3-1"},
          {EquilibriumId::A3, "saddle 3-1"}};
      for (const auto& [id, label] : want) {
        const std::string tag = std::string(to_string(id)) + " at k = (" +
                                std::to_string(p.k1) + ", " + std::to_string(p.k2) + ")";
        c.expect(classify(p, id).label() == label, tag + " label");
        const Eigen::Vector4cd oracle =
            Eigen::EigenSolver<Eigen::Matrix4d>(to_eigen(jacobian(p, eq[id]))).eigenvalues();
        const Spectrum closed = boundary_spectra(p, id).spectrum;
        double scale = 1.0;
        for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(oracle[i]));
        c.expect(spectrum_distance(closed, oracle) <= 1e-8 * scale, tag + " spectrum");
      }
    }
  });

  criterion(8, "Routh-Hurwitz verdict against roots", [&](Check& c) {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.05, 3.0);
    std::uniform_int_distribution<int> shape(0, 2);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      std::array<cplx, 4> r;
      switch (shape(rng)) {
        case 0: {
          const cplx a(re(rng), im(rng)), b(re(rng), im(rng));
          r = {a, std::conj(a), b, std::conj(b)};
          break;
        }
        case 1: {
          const cplx a(re(rng), im(rng));
          r = {a, std::conj(a), re(rng), re(rng)};
          break;
        }
        default:
          r = {re(rng), re(rng), re(rng), re(rng)};
      }
      bool stable = true;
      double margin = 1e300;
      for (const auto& z : r) {
        stable = stable && z.real() < 0.0;
        margin = std::min(margin, std::abs(z.real()));
      }
      if (margin < 1e-6) continue;
      ++checked;
      if (routh_hurwitz(from_roots(r)).stable != stable)
        c.expect(false, "mismatch at sample " + std::to_string(i));
    }
    const auto boundary = routh_hurwitz({1.0, 3.0, 3.0, 3.0, 2.0});
    c.expect(boundary.delta == 0.0, "(l^2+1)(l^2+3l+2) gives zero discriminant");
    c.info << checked << " quartics outside the margin";
  });

  criterion(9, "unstable cycle on the stable side near the Hopf point", [&](Check& c) {
    const OffCurve path;
    const double e1 = path.distance_for(-1e-3);
    const ModelParams p1 = path.at(e1);
    const PeriodicOrbit o1 = find_periodic_orbit(p1);
    const double omega = omega0_at(q_point);
    const double t0 = 2.0 * std::numbers::pi / omega;
    c.expect(std::abs(o1.period - t0) <= 0.1 * t0, "period within 10%");
    int outside = 0;
    double trivial = 1e300;
    for (const auto& mu : o1.multipliers) {
      if (std::abs(mu) > 1.0 + 1e-6) ++outside;
      trivial = std::min(trivial, std::abs(mu - 1.0));
    }
    c.expect(outside == 1, "exactly one multiplier outside the unit circle");
    c.expect(trivial <= 1e-3, "trivial multiplier");
    c.expect(o1.verdict == OrbitVerdict::UnstableSaddleCycle, "verdict");
    const ModelParams p2 = path.at(e1 / 10.0);
    const PeriodicOrbit o2 = find_periodic_orbit(p2);
    const double slope = std::log10(o1.amplitude / o2.amplitude);
    c.near(slope, 0.5, 0.05, "amplitude slope");
    c.info << "T = " << o1.period << ", slope " << slope << ", |mu|max = "
           << std::abs(o1.multipliers[0]);
  });

  criterion(10, "planted normal forms recovered", [&](Check& c) {
    struct Case {
      double gamma, omega, cr, ci, m3, m4;
    };
    const Case cases[] = {{-1e-3, 2.0, 0.5, 0.3, -1.5, -0.4},
                          {-5e-3, 1.3, 2.0, -0.7, -0.8, -3.0},
                          {-2e-2, 3.5, 0.1, 0.05, -2.2, -0.6}};
    int n = 0;
    for (const auto& k : cases) {
      planted::NormalFormSystem sys;
      sys.gamma = k.gamma;
      sys.omega = k.omega;
      sys.cr = k.cr;
      sys.ci = k.ci;
      sys.m3 = k.m3;
      sys.m4 = k.m4;
      const std::string tag = "case " + std::to_string(n++);
      HopfOptions o;
      o.allow_off_axis = true;
      const HopfReport r = first_lyapunov(sys.expansion(), o);
      // l1 depends on the scale of q; the planted value belongs to sys.q().
      HopfOptions scaled = o;
      scaled.q_override = sys.q();
      const double l1 = first_lyapunov(sys.expansion(), scaled).l1;
      c.near(l1, sys.l1(), 1e-3 * sys.l1(), tag + " l1");
      ShootingSetup setup;
      setup.center = sys.center;
      setup.q = r.q;
      setup.omega = r.omega0;
      setup.hint_radius = predicted_cycle_radius(r);
      const PeriodicOrbit orbit = find_periodic_orbit(sys.system(), setup);
      double worst = 0.0;
      for (const auto& x : orbit.cycle.x)
        worst = std::max(worst, std::abs(sys.plane_radius(x) / sys.radius() - 1.0));
      c.expect(worst <= 1e-3, tag + " radius");
      c.near(orbit.period, sys.period(), 1e-3 * sys.period(), tag + " period");
      for (double m : sys.multipliers()) {
        double best = 1e300;
        for (const auto& mu : orbit.multipliers) best = std::min(best, std::abs(mu - m));
        c.expect(best <= 1e-3 * m, tag + " multiplier " + std::to_string(m));
      }
    }
  });

  std::printf("%s: %d of 10 criteria failed", n_failed ? "FAIL" : "PASS",
              n_failed + n_known);
  if (n_known) std::printf(" (%d known)", n_known);
  std::printf("\n");
  return n_failed ? 1 : 0;
}
