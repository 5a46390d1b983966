#include "hpbif/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hpbif/continuation.hpp"
#include "hpbif/dynamics.hpp"
#include "hpbif/errors.hpp"
#include "hpbif/hopf.hpp"
#include "hpbif/stability.hpp"

namespace hpbif::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << msg;
  throw Error(ErrorCategory::Parse, os.str());
}

double parse_number(std::string_view text, std::size_t line,
                    std::string_view key) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    parse_error(line, "value of '" + std::string(key) + "' is not a number: '" +
                          std::string(text) + "'");
  return v;
}

std::size_t parse_count(std::string_view text, std::size_t line,
                        std::string_view key) {
  const double v = parse_number(text, line, key);
  if (v < 1.0 || v != std::floor(v) || v > 1e9)
    parse_error(line, "'" + std::string(key) + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

void require_positive(double v, std::size_t line, std::string_view key) {
  if (!(v > 0.0))
    parse_error(line, "'" + std::string(key) + "' must be positive");
}

struct ToleranceKey {
  std::string_view name;
  double ToleranceSettings::*field;
};

constexpr ToleranceKey tolerance_keys[] = {
    {"equilibrium_tol", &ToleranceSettings::equilibrium},
    {"axis_band", &ToleranceSettings::axis_band},
    {"sigma_band", &ToleranceSettings::sigma_band},
    {"reproduction_degenerate", &ToleranceSettings::reproduction_degenerate},
    {"lyapunov_zero", &ToleranceSettings::lyapunov_zero},
    {"root_abs", &ToleranceSettings::root_abs},
    {"integrator_tol", &ToleranceSettings::integrator},
    {"shooting_tol", &ToleranceSettings::shooting},
    {"floquet_band", &ToleranceSettings::floquet_band},
};

void check_range(const RunConfig& cfg, std::size_t line) {
  if (cfg.sigma_k1_min && cfg.sigma_k1_max &&
      !(*cfg.sigma_k1_min < *cfg.sigma_k1_max))
    parse_error(line, "sigma_k1_min must be below sigma_k1_max");
}

// ---- output helpers -------------------------------------------------------

void csv_row(std::ostream& os, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) os << ',';
    os << c;
    first = false;
  }
  os << '\n';
}

std::string fmt(double x) { return format_number(x); }

std::string complex_text(cplx z) {
  std::ostringstream os;
  os << std::setprecision(10) << z.real() << (z.imag() < 0 ? " - " : " + ")
     << std::abs(z.imag()) << "i";
  return os.str();
}

void print_vector(std::ostream& os, const char* name, const CVec4& v) {
  os << "  " << name << " = (";
  for (std::size_t i = 0; i < 4; ++i)
    os << (i ? ", " : "") << complex_text(v[i]);
  os << ")\n";
}

void print_state(std::ostream& os, const char* name, const State& x) {
  os << "  " << name << " = (" << std::setprecision(10) << x[0] << ", " << x[1]
     << ", " << x[2] << ", " << x[3] << ")\n";
}

void warn_negative(std::ostream& err, std::string_view what, const State& x) {
  const auto neg = negative_components(x);
  if (neg.empty()) return;
  err << "warning: " << what << " has negative components:";
  for (const auto& n : neg) err << ' ' << n;
  err << '\n';
}

std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::InvalidInput, "cannot open " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::string_view s = trim(line);
    if (const auto h = s.find('#'); h != std::string_view::npos)
      s = trim(s.substr(0, h));
    if (s.empty()) continue;
    std::istringstream ls{std::string(s)};
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra))
      parse_error(no, path + ": expected two numbers 're im'");
    rows.emplace_back(parse_number(a, no, "re"), parse_number(b, no, "im"));
  }
  return rows;
}

CVec4 read_q_file(const std::string& path) {
  const auto rows = read_pairs(path);
  if (rows.size() != 4)
    parse_error(0, path + ": expected 4 lines 're im', found " +
                       std::to_string(rows.size()));
  CVec4 q;
  for (std::size_t i = 0; i < 4; ++i) q[i] = cplx(rows[i].first, rows[i].second);
  return q;
}

// ---- subcommands ------------------------------------------------------------

void cmd_equilibria(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ModelParams& p = cfg.params;
  const auto r = reproduction_numbers(p);
  err << std::setprecision(10) << "R1 = " << r.R1 << "\nR2 = " << r.R2 << '\n';
  try {
    err << "k1_max = " << k1_max(p) << '\n';
  } catch (const Error& e) {
    err << "k1_max undefined: " << e.what() << '\n';
  }
  const auto adm = is_admissible(p);
  for (const auto& v : adm.violations) err << "warning: " << v << '\n';
  const EquilibriumSet eq = equilibria(p);
  csv_row(out, {"name", "P", "M", "L", "G"});
  for (const auto& e : eq.points) {
    csv_row(out, {std::string(to_string(e.id)), fmt(e.x[0]), fmt(e.x[1]),
                  fmt(e.x[2]), fmt(e.x[3])});
    warn_negative(err, to_string(e.id), e.x);
  }
}

void cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  csv_row(out, {"name", "kind", "re1", "im1", "re2", "im2", "re3", "im3",
                "re4", "im4"});
  for (auto id : {EquilibriumId::A1, EquilibriumId::A2, EquilibriumId::A3,
                  EquilibriumId::A4}) {
    const Classification c = classify(cfg.params, id, cfg.tol);
    const auto& v = c.spectrum.values;
    csv_row(out, {std::string(to_string(id)), c.label(), fmt(v[0].real()),
                  fmt(v[0].imag()), fmt(v[1].real()), fmt(v[1].imag()),
                  fmt(v[2].real()), fmt(v[2].imag()), fmt(v[3].real()),
                  fmt(v[3].imag())});
    err << to_string(id) << ": " << c.label() << '\n';
    if (c.routh)
      err << "  Routh-Hurwitz delta = " << std::setprecision(10)
          << c.routh->delta << (c.routh->stable ? " (stable)" : "") << '\n';
    for (const auto& d : c.diagnostics) err << "  " << d << '\n';
  }
}

void cmd_hopf(const RunConfig& cfg, const std::string& q_file,
              const std::string& normalization, bool snap, std::ostream& out,
              std::ostream& err) {
  ModelParams p = cfg.params;
  validate(p);
  const auto c = a_coefficients(p);
  const double delta = routh_hurwitz(c).delta;
  if (snap && std::abs(delta) > cfg.tol.sigma_band * delta_scale(c)) {
    const auto k1 = solve_sigma_k1(p.k2, p.c2, p);
    if (!k1 || std::abs(*k1 - p.k1) > 1e-2 * p.k1) {
      std::ostringstream os;
      os << "(k1, k2) = (" << p.k1 << ", " << p.k2
         << ") is not on the Hopf curve (delta = " << delta
         << ") and no Hopf point lies within 1% in k1";
      throw Error(ErrorCategory::NotOnSigma, os.str());
    }
    err << std::setprecision(12) << "note: moved k1 from " << p.k1 << " to "
        << *k1 << " to land on the Hopf curve (delta was " << delta << ")\n";
    p.k1 = *k1;
  }

  HopfOptions opt;
  opt.normalization = normalization == "last-component"
                          ? Normalization::LastComponentUnit
                          : Normalization::UnitNorm;
  if (!q_file.empty()) opt.q_override = read_q_file(q_file);
  const HopfReport r = lyapunov_l1(p, opt, cfg.tol);

  err << std::setprecision(10) << "Hopf point (k1, k2) = (" << p.k1 << ", "
      << p.k2 << ")\n"
      << "  omega0 = " << r.omega0 << '\n';
  print_vector(err, "q", r.q);
  print_vector(err, "p", r.p);
  print_vector(err, "h11", r.h11);
  print_vector(err, "h20", r.h20);
  err << "  G21 = " << complex_text(r.G21) << '\n'
      << "  l1 = " << r.l1 << "  (unit-frequency scaling: "
      << r.l1_unit_frequency << ")\n"
      << "  transversality = " << r.transversality << '\n'
      << "  type: " << to_string(classify_hopf(r.l1, cfg.tol)) << '\n'
      << "  normalization: " << r.normalization_tag << '\n';

  csv_row(out, {"k1", "k2", "omega0", "re_g21", "im_g21", "l1",
                "transversality", "l1_unit_frequency"});
  csv_row(out, {fmt(p.k1), fmt(p.k2), fmt(r.omega0), fmt(r.G21.real()),
                fmt(r.G21.imag()), fmt(r.l1), fmt(r.transversality),
                fmt(r.l1_unit_frequency)});
}

void write_svg(const std::string& path, const ModelParams& p,
               const std::vector<CurvePoint>& curve) {
  std::ofstream svg(path);
  if (!svg) throw Error(ErrorCategory::InvalidInput, "cannot write " + path);
  const double kmax = k1_max(p);
  const double span = 1.1 * kmax;
  const double W = 640, H = 640, m = 60;
  auto X = [&](double k) { return m + (W - 2 * m) * k / span; };
  auto Y = [&](double k) { return H - m - (H - 2 * m) * k / span; };
  svg << std::setprecision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Admissible set: 0 < k2 <= k1 < k1_max.
  svg << "<polygon fill=\"#dde8f5\" stroke=\"none\" points=\"" << X(0) << ','
      << Y(0) << ' ' << X(kmax) << ',' << Y(0) << ' ' << X(kmax) << ','
      << Y(kmax) << "\"/>\n";
  svg << "<line x1=\"" << X(0) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(span)
      << "\" y2=\"" << Y(span) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  svg << "<line x1=\"" << X(kmax) << "\" y1=\"" << Y(0) << "\" x2=\"" << X(kmax)
      << "\" y2=\"" << Y(span) << "\" stroke=\"gray\"/>\n";
  if (!curve.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
    for (const auto& c : curve) svg << X(c.k1) << ',' << Y(c.k2) << ' ';
    svg << "\"/>\n";
  }
  // Axes with five ticks each.
  svg << "<g stroke=\"black\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m
      << "\" y2=\"" << H - m << "\"/>\n"
      << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << m
      << "\" y2=\"" << m << "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double k = span * i / 5.0;
    svg << "<line x1=\"" << X(k) << "\" y1=\"" << H - m << "\" x2=\"" << X(k)
        << "\" y2=\"" << H - m + 5 << "\"/>"
        << "<text stroke=\"none\" x=\"" << X(k) - 15 << "\" y=\"" << H - m + 18
        << "\">" << k << "</text>\n"
        << "<line x1=\"" << m - 5 << "\" y1=\"" << Y(k) << "\" x2=\"" << m
        << "\" y2=\"" << Y(k) << "\"/>"
        << "<text stroke=\"none\" x=\"4\" y=\"" << Y(k) + 4 << "\">" << k
        << "</text>\n";
  }
  svg << "<text stroke=\"none\" x=\"" << W / 2 << "\" y=\"" << H - 15
      << "\">k1</text>\n<text stroke=\"none\" x=\"10\" y=\"" << m - 20
      << "\">k2</text>\n</g>\n</svg>\n";
}

void cmd_sigma(const RunConfig& cfg, const std::vector<double>& k1_list,
               const std::string& svg_path, std::ostream& out,
               std::ostream& err) {
  const ModelParams& p = cfg.params;
  std::vector<CurvePoint> curve;
  if (!k1_list.empty()) {
    curve = trace_sigma_at(p.c2, k1_list, p, cfg.threads);
  } else if (cfg.sigma_k1_min || cfg.sigma_k1_max) {
    if (!(cfg.sigma_k1_min && cfg.sigma_k1_max))
      throw Error(ErrorCategory::InvalidInput,
                  "give both ends of the k1 range or neither");
    const double a = *cfg.sigma_k1_min, b = *cfg.sigma_k1_max;
    const std::size_t n = std::max<std::size_t>(cfg.sigma_points, 2);
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i)
      ks[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    curve = trace_sigma_at(p.c2, ks, p, cfg.threads);
  } else {
    curve = trace_sigma(p.c2, cfg.sigma_points, p, cfg.threads);
  }
  if (curve.empty())
    err << "note: the Hopf curve does not meet the admissible set at c2 = "
        << p.c2 << '\n';
  else
    err << "Hopf curve: " << curve.size() << " points, k1 in ["
        << std::setprecision(8) << curve.front().k1 << ", " << curve.back().k1
        << "]\n";
  for (const auto& c : curve)
    if (c.multiple_roots)
      err << "warning: several Hopf roots on the slice k1 = " << c.k1
          << "; reporting the smallest k2\n";

  csv_row(out, {"k1", "k2", "omega0", "l1_sign", "delta_residual"});
  for (const auto& c : curve)
    csv_row(out, {fmt(c.k1), fmt(c.k2), fmt(c.omega0), std::to_string(c.l1_sign),
                  fmt(c.delta_residual)});
  if (!svg_path.empty()) write_svg(svg_path, p, curve);
}

void cmd_tangency(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TangencyResult t = find_tangency(cfg.params);
  err << std::setprecision(10) << "c2* = " << t.c2_star << "\nT = (" << t.k1
      << ", " << t.k2 << ")\ngrad delta = (" << t.gradient[0] << ", "
      << t.gradient[1] << ")\nk1_max(c2*) = " << t.k1_max << '\n';
  for (const auto& d : t.diagnostics) err << "  " << d << '\n';
  csv_row(out, {"c2_star", "k1", "k2", "grad_k1", "grad_k2",
                "second_derivative", "k1_max"});
  csv_row(out, {fmt(t.c2_star), fmt(t.k1), fmt(t.k2), fmt(t.gradient[0]),
                fmt(t.gradient[1]), fmt(t.second_derivative), fmt(t.k1_max)});
}

void write_trajectory(std::ostream& out, const Trajectory& tr) {
  csv_row(out, {"t", "P", "M", "L", "G"});
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    csv_row(out, {fmt(tr.t[i]), fmt(tr.x[i][0]), fmt(tr.x[i][1]),
                  fmt(tr.x[i][2]), fmt(tr.x[i][3])});
}

void cmd_simulate(const RunConfig& cfg, const std::vector<double>& x0v,
                  std::ostream& out, std::ostream& err) {
  const State x0{x0v[0], x0v[1], x0v[2], x0v[3]};
  const Trajectory tr = integrate(cfg.params, x0, cfg.t_end,
                                  cfg.tol.integrator, cfg.sample_dt);
  err << "steps " << tr.stats.steps << ", rejected " << tr.stats.rejected
      << ", max error estimate " << tr.stats.max_error_estimate << '\n';
  for (std::size_t i = 0; i < tr.x.size(); ++i) {
    if (!negative_components(tr.x[i]).empty()) {
      std::ostringstream what;
      what << "trajectory at t = " << tr.t[i];
      warn_negative(err, what.str(), tr.x[i]);
      break;
    }
  }
  write_trajectory(out, tr);
}

void cmd_orbit(const RunConfig& cfg, std::optional<double> hint,
               std::ostream& out, std::ostream& err) {
  const ModelParams& p = cfg.params;
  const PeriodicOrbit o = find_periodic_orbit(p, hint, cfg.tol);
  err << std::setprecision(10) << "period = " << o.period
      << "\namplitude = " << o.amplitude << "\nclosure = " << o.closure << '\n';
  print_state(err, "anchor", o.anchor);
  err << "Floquet multipliers:\n";
  for (const auto& m : o.multipliers)
    err << "  " << complex_text(m) << "  |mu| = " << std::abs(m) << '\n';
  err << "verdict: " << to_string(o.verdict) << "\nNewton residuals:";
  for (double r : o.residual_history) err << ' ' << std::setprecision(3) << r;
  err << '\n';
  write_trajectory(out, o.cycle);
}

int exit_code(ErrorCategory c) {
  return (c == ErrorCategory::Parse || c == ErrorCategory::InvalidInput) ? 1 : 2;
}

}  // namespace

std::vector<std::string_view> setting_keys() {
  std::vector<std::string_view> keys;
  for (const auto& t : tolerance_keys) keys.push_back(t.name);
  for (std::string_view k : {"sigma_points", "sigma_k1_min", "sigma_k1_max",
                             "t_end", "sample_dt", "threads"})
    keys.push_back(k);
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value,
                   std::size_t line) {
  for (std::size_t i = 0; i < ModelParams::field_names.size(); ++i) {
    if (key != ModelParams::field_names[i]) continue;
    const double v = parse_number(value, line, key);
    require_positive(v, line, key);
    cfg.params.field(i) = v;
    return;
  }
  for (const auto& t : tolerance_keys) {
    if (key != t.name) continue;
    const double v = parse_number(value, line, key);
    require_positive(v, line, key);
    cfg.tol.*t.field = v;
    return;
  }
  if (key == "sigma_points") {
    cfg.sigma_points = parse_count(value, line, key);
  } else if (key == "sigma_k1_min" || key == "sigma_k1_max") {
    const double v = parse_number(value, line, key);
    require_positive(v, line, key);
    (key == "sigma_k1_min" ? cfg.sigma_k1_min : cfg.sigma_k1_max) = v;
    check_range(cfg, line);
  } else if (key == "t_end") {
    cfg.t_end = parse_number(value, line, key);
    require_positive(cfg.t_end, line, key);
  } else if (key == "sample_dt") {
    cfg.sample_dt = parse_number(value, line, key);
    if (cfg.sample_dt < 0.0) parse_error(line, "'sample_dt' must be >= 0");
  } else if (key == "threads") {
    cfg.threads = static_cast<unsigned>(parse_count(value, line, key));
  } else {
    parse_error(line, "unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto h = line.find('#'); h != std::string_view::npos)
      line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      parse_error(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) parse_error(line_no, "missing key before '='");
    apply_setting(base, key, line.substr(eq + 1), line_no);
  }
  return base;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Hopf bifurcation analysis of the four-compartment "
               "host-parasitoid model",
               "hpbif"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, output_path;
  app.add_option("-c,--config", config_path, "key = value settings file");
  app.add_option("-o,--output", output_path, "write CSV here instead of stdout");
  std::vector<std::string> sets;
  app.add_option("--set", sets, "extra setting, e.g. --set sigma_band=1e-4");

  std::array<double, 12> pv{};
  std::array<CLI::Option*, 12> popt{};
  for (std::size_t i = 0; i < 12; ++i) {
    const std::string name(ModelParams::field_names[i]);
    popt[i] = app.add_option("--" + name, pv[i], "model parameter " + name);
  }
  unsigned threads = 1;
  auto* thread_opt = app.add_option("--threads", threads, "worker threads");

  auto* eq = app.add_subcommand("equilibria", "A1..A4, R1, R2 and k1_max");
  auto* cl = app.add_subcommand("classify", "stability of each equilibrium");

  auto* hp = app.add_subcommand("hopf", "first Lyapunov coefficient at A4");
  std::string q_file, normalization = "unit";
  bool no_snap = false;
  hp->add_option("--q-from-file", q_file, "eigenvector q: four lines 're im'");
  hp->add_option("--normalization", normalization, "unit or last-component")
      ->check(CLI::IsMember({"unit", "last-component"}));
  hp->add_flag("--no-snap", no_snap,
               "fail instead of moving k1 onto the Hopf curve");

  auto* sg = app.add_subcommand("sigma", "trace the Hopf curve");
  std::size_t n_points = 200;
  auto* n_opt = sg->add_option("--n", n_points, "number of k1 samples");
  std::string svg_path;
  sg->add_option("--svg", svg_path, "also draw the curve as SVG");
  std::vector<double> k1_list;
  sg->add_option("--k1-list", k1_list, "explicit k1 values")->delimiter(',');
  double k1_from = 0.0, k1_to = 0.0;
  auto* from_opt = sg->add_option("--k1-from", k1_from, "first k1 of the grid");
  auto* to_opt = sg->add_option("--k1-to", k1_to, "last k1 of the grid");

  auto* tg = app.add_subcommand("tangency", "c2 where the Hopf curve leaves S");

  auto* sm = app.add_subcommand("simulate", "integrate the model");
  std::vector<double> x0;
  sm->add_option("--x0", x0, "initial state P,M,L,G")
      ->expected(4)
      ->delimiter(',')
      ->required();
  double t_end = 0.0, dt = 0.0;
  auto* tend_opt = sm->add_option("--t-end", t_end, "final time");
  auto* dt_opt = sm->add_option("--dt", dt, "output spacing (0: every step)");

  auto* ob = app.add_subcommand("orbit", "unstable cycle near A4 by shooting");
  double hint = 0.0;
  auto* hint_opt = ob->add_option("--hint-radius", hint,
                                  "initial distance from A4 (state units)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        throw Error(ErrorCategory::InvalidInput, "cannot open " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str(), cfg);
    }
    for (const auto& s : sets) {
      const auto pos = s.find('=');
      if (pos == std::string::npos)
        throw Error(ErrorCategory::Parse, "--set expects key=value, got " + s);
      apply_setting(cfg, trim(std::string_view(s).substr(0, pos)),
                    std::string_view(s).substr(pos + 1), 0);
    }
    for (std::size_t i = 0; i < 12; ++i)
      if (popt[i]->count()) {
        require_positive(pv[i], 0, ModelParams::field_names[i]);
        cfg.params.field(i) = pv[i];
      }
    if (thread_opt->count()) cfg.threads = std::max(1u, threads);
    if (n_opt->count()) cfg.sigma_points = n_points;
    if (from_opt->count()) cfg.sigma_k1_min = k1_from;
    if (to_opt->count()) cfg.sigma_k1_max = k1_to;
    check_range(cfg, 0);
    if (tend_opt->count()) {
      require_positive(t_end, 0, "t_end");
      cfg.t_end = t_end;
    }
    if (dt_opt->count()) {
      if (dt < 0.0) parse_error(0, "'sample_dt' must be >= 0");
      cfg.sample_dt = dt;
    }
    validate(cfg.params);

    std::ofstream file;
    std::ostream* csv = &out;
    if (!output_path.empty()) {
      file.open(output_path);
      if (!file)
        throw Error(ErrorCategory::InvalidInput, "cannot write " + output_path);
      csv = &file;
    }

    if (eq->parsed()) cmd_equilibria(cfg, *csv, err);
    else if (cl->parsed()) cmd_classify(cfg, *csv, err);
    else if (hp->parsed()) cmd_hopf(cfg, q_file, normalization, !no_snap, *csv, err);
    else if (sg->parsed()) cmd_sigma(cfg, k1_list, svg_path, *csv, err);
    else if (tg->parsed()) cmd_tangency(cfg, *csv, err);
    else if (sm->parsed()) cmd_simulate(cfg, x0, *csv, err);
    else if (ob->parsed())
      cmd_orbit(cfg, hint_opt->count() ? std::optional<double>(hint) : std::nullopt,
                *csv, err);
    csv->flush();
    return 0;
  } catch (const Error& e) {
    err << "error: " << category_name(e.category()) << ": " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hpbif::cli
