#include "utm/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "utm/acceptance.hpp"
#include "utm/error.hpp"
#include "utm/linear.hpp"
#include "utm/nonlinear.hpp"
#include "utm/norms.hpp"
#include "utm/numerics.hpp"
#include "utm/oracle.hpp"

namespace utm {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Config, std::string("key '") + key + "': " + e.what());
  }
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Config, std::string("missing key '") + key + "'");
  return j.at(key);
}

Params params_of(const Json& source) {
  Params p;
  if (source.contains("params"))
    for (const auto& [k, v] : source.at("params").items()) p[k] = v.get<double>();
  return p;
}

double param(const Params& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

std::function<double(double)> generator(const std::string& name, const Params& p, SampleRole role) {
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "constant") return [v = param(p, "value", 1.0)](double) { return v; };
  if (name == "linear") return [a = param(p, "a", 0.0), b = param(p, "b", 1.0)](double v) { return a + b * v; };
  if (name == "sine")
    return [a = param(p, "amplitude", 1.0), k = param(p, "n", 1.0) * kPi / param(p, "l", 1.0)](double v) {
      return a * std::sin(k * v);
    };
  if (name == "gaussian")
    return [a = param(p, "amplitude", 1.0), c = param(p, "center", 0.0), w = param(p, "width", 1.0)](double v) {
      return a * std::exp(-(v - c) * (v - c) / (w * w));
    };
  if (name == "exponential")
    return [a = param(p, "amplitude", 1.0), r = param(p, "rate", 1.0)](double v) { return a * std::exp(-r * v); };
  if (name == "power")
    return [a = param(p, "amplitude", 1.0), e = param(p, "exponent", 1.0)](double v) { return a * std::pow(v, e); };
  const ExactName exact = exact_name(name);
  if (role == SampleRole::Profile)
    return [exact, p, t = param(p, "t", 0.0)](double v) { return exact_solution(exact, p, v, t); };
  return [exact, p, x = param(p, "x", 0.0)](double v) { return exact_solution(exact, p, x, v); };
}

PiecewiseLinear read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open sample file '" + path + "'");
  std::vector<double> xs, vs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    double a, b;
    char comma;
    std::istringstream ls(line);
    if (!(ls >> a >> comma >> b) || comma != ',') {
      if (xs.empty()) continue;  // header
      throw Error(ErrorCode::Config, path + ":" + std::to_string(lineno) + ": expected 'x,value'");
    }
    xs.push_back(a);
    vs.push_back(b);
  }
  if (xs.size() < 2) throw Error(ErrorCode::InsufficientData, path + ": need at least two samples");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - (xs.front() + h * static_cast<double>(i))) > 1e-9 * std::max(1.0, std::abs(xs.back())))
      throw Error(ErrorCode::BadGrid, path + ": samples must be uniformly spaced");
  return PiecewiseLinear(xs.front(), h, std::move(vs));
}

SampledField forcing_from_json(const Json& j, double length, double T) {
  const std::string name = get_or<std::string>(j, "generator", "zero");
  const auto nx = get_or<std::size_t>(j, "n_x", 201);
  const auto nt = get_or<std::size_t>(j, "n_t", 101);
  if (nx < 2 || nt < 2) throw Error(ErrorCode::BadGrid, "forcing needs n_x, n_t >= 2");
  SampledField F;
  F.dx = length / static_cast<double>(nx - 1);
  F.dt = T / static_cast<double>(nt - 1);
  F.values = Matrix(nt, nx);
  if (name == "zero") return F;
  const ExactName exact = exact_name(name);
  const Params p = params_of(j);
  for (std::size_t k = 0; k < nt; ++k)
    for (std::size_t i = 0; i < nx; ++i) F.values(k, i) = exact_forcing(exact, p, F.x(i), F.t(k));
  return F;
}

Json grid_json(const GridSpec& g) {
  return Json{{"n_x", g.n_x}, {"n_t", g.n_t}, {"x_max", g.x_max}, {"t_max", g.t_max}};
}

Json norm_json(const NormReport& r) {
  Json parts = Json::object();
  for (const auto& [k, v] : r.parts) parts[k] = v;
  return Json{{"value", r.value},
              {"parts", parts},
              {"grid_step", r.grid_step},
              {"samples", r.samples},
              {"refinement_delta", r.refinement_delta},
              {"error_bar", r.error_bar}};
}

Json diag_json(const std::vector<QuadratureDiagnostics>& ds) {
  Json out = Json::array();
  for (const auto& d : ds)
    out.push_back(Json{{"term", d.term},
                       {"radius", d.radius},
                       {"residual", d.residual},
                       {"nodes", d.nodes},
                       {"warning", d.warning}});
  return out;
}

Json check_json(const std::string& name, bool passed, double value, double tolerance) {
  return Json{{"name", name}, {"passed", passed}, {"value", value}, {"tolerance", tolerance}};
}

/// Max deviation from a catalog solution over the configured window.
Json exact_check(const Json& j, const SolutionField& f) {
  const std::string name = require(j, "name").get<std::string>();
  const ExactName exact = exact_name(name);
  const Params p = params_of(j);
  const double tol = get_or<double>(j, "tolerance", 1e-6);
  const bool relative = get_or<bool>(j, "relative", false);
  const auto xr = get_or<std::vector<double>>(j, "x_range", {-1e300, 1e300});
  const auto tr = get_or<std::vector<double>>(j, "t_range", {-1e300, 1e300});
  double worst = 0.0;
  for (std::size_t jt = 0; jt < f.t_grid.size(); ++jt) {
    const double t = f.t_grid[jt];
    if (t < tr.at(0) - 1e-12 || t > tr.at(1) + 1e-12) continue;
    for (std::size_t i = 0; i < f.x_grid.size(); ++i) {
      const double x = f.x_grid[i];
      if (x < xr.at(0) - 1e-12 || x > xr.at(1) + 1e-12) continue;
      const double e = exact_solution(exact, p, x, t);
      double d = std::abs(f.at(i, jt) - e);
      if (relative) {
        if (std::abs(e) < 1e-12) continue;
        d /= std::abs(e);
      }
      worst = std::max(worst, d);
    }
  }
  return check_json(std::string(relative ? "relative" : "absolute") + " error vs " + name, worst < tol, worst, tol);
}

void write_trace_csv(const PicardTrace& tr, const std::string& path) {
  std::ofstream out(path);
  out << "iteration,difference_norm,iterate_norm,ratio\n";
  char buf[128];
  for (std::size_t k = 0; k < tr.difference_norms.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", k + 1, tr.difference_norms[k], tr.iterate_norms[k]);
    out << buf;
    if (k >= 1 && k - 1 < tr.ratios.size()) {
      std::snprintf(buf, sizeof buf, "%.17g", tr.ratios[k - 1]);
      out << buf;
    }
    out << "\n";
  }
}

struct Context {
  Json config;
  std::string base_dir;
  fs::path out_dir;
  std::uint64_t seed = 0;
  RunOptions opts;
  Json checks = Json::array();
  Json timings = Json::object();
};

ProblemSpec problem_of(Context& ctx) {
  ProblemSpec spec = problem_from_json(require(ctx.config, "problem"), ctx.base_dir);
  if (ctx.opts.tol) spec.tol.quad = *ctx.opts.tol;
  spec.tol.threads = ctx.opts.threads;
  return validate_problem(spec);
}

bool all_passed(const Json& checks) {
  for (const auto& c : checks)
    if (!c.at("passed").get<bool>()) return false;
  return true;
}

Json cmd_solve_linear(Context& ctx, std::ostream& out) {
  const ProblemSpec spec = problem_of(ctx);
  const auto t0 = std::chrono::steady_clock::now();
  const LinearSolveReport rep = solve_linear(spec);
  ctx.timings["solve"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_field_csv(rep.field, (ctx.out_dir / "field.csv").string());
  Json comps = Json::array();
  for (const auto& [name, f] : rep.components) {
    write_field_csv(f, (ctx.out_dir / ("components_" + name + ".csv")).string());
    comps.push_back(name);
  }
  Json res{{"domain", to_string(spec.domain)},
           {"regime", to_string(spec.s.regime)},
           {"s", spec.s.s},
           {"m", spec.s.m},
           {"T", spec.T},
           {"grid", grid_json(spec.grid)},
           {"quadrature", diag_json(rep.quadrature_residuals)},
           {"residual_warning", rep.residual_warning()},
           {"finite", rep.field.all_finite()},
           {"components", comps}};
  if (get_or<bool>(ctx.config, "norms", true)) {
    res["data_norm"] = data_norm(spec);
    res["solution_norm"] = norm_json(xy_norm(rep.field, spec));
  }
  if (ctx.config.contains("exact")) ctx.checks.push_back(exact_check(ctx.config.at("exact"), rep.field));
  out << "solved " << to_string(spec.domain) << " problem on " << spec.grid.n_x << "x" << spec.grid.n_t
      << " grid; wrote " << (ctx.out_dir / "field.csv").string() << "\n";
  return res;
}

Json cmd_solve_rd(Context& ctx, std::ostream& out, int& code) {
  const ProblemSpec spec = problem_of(ctx);
  const Json pj = ctx.config.value("picard", Json::object());
  PicardOptions po;
  po.ignore_lifespan = get_or<bool>(pj, "ignore_lifespan", false);
  const auto t0 = std::chrono::steady_clock::now();
  const PicardResult pr = picard_solve(spec, po);
  ctx.timings["picard"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_field_csv(pr.field, (ctx.out_dir / "field.csv").string());
  write_trace_csv(pr.trace, (ctx.out_dir / "trace.csv").string());
  const PicardTrace& tr = pr.trace;
  Json res{{"iterations", tr.iterations},
           {"converged", tr.converged},
           {"non_contraction", tr.non_contraction},
           {"lifespan", tr.lifespan},
           {"T", tr.T_star},
           {"fixed_point_residual", tr.fixed_point_residual},
           {"difference_norms", tr.difference_norms},
           {"iterate_norms", tr.iterate_norms},
           {"ratios", tr.ratios},
           {"data_norm", data_norm(spec)}};
  try {
    res["contraction_ratio"] = contraction_ratio(tr);
  } catch (const Error&) {
    res["contraction_ratio"] = nullptr;
  }
  if (pj.contains("max_ratio")) {
    const double lim = pj.at("max_ratio").get<double>();
    double worst = 0.0;
    for (double r : tr.ratios) worst = std::max(worst, r);
    ctx.checks.push_back(check_json("max contraction ratio", worst < lim, worst, lim));
  }
  if (pj.contains("oracle")) {
    const Json& oj = pj.at("oracle");
    GridSpec g;
    g.n_x = get_or<std::size_t>(oj, "n_x", 401);
    g.n_t = get_or<std::size_t>(oj, "n_t", 401);
    g.t_max = spec.T;
    const double tol = get_or<double>(oj, "tolerance", 1e-3);
    const OracleRun fd = fd_solve(spec, g, true);
    const auto& u = pr.field;
    if ((g.n_x - 1) % (u.x_grid.size() - 1) != 0)
      throw Error(ErrorCode::BadGrid, "oracle n_x - 1 must be a multiple of the solution n_x - 1");
    const std::size_t stride = (g.n_x - 1) / (u.x_grid.size() - 1);
    const std::size_t j = u.t_grid.size() - 1;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < u.x_grid.size(); ++i) {
      const double d = u.at(i, j) - fd.field.at(i * stride, g.n_t - 1);
      num += d * d;
      den += fd.field.at(i * stride, g.n_t - 1) * fd.field.at(i * stride, g.n_t - 1);
    }
    const double rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    ctx.checks.push_back(check_json("relative L2 vs IMEX oracle at T", rel < tol, rel, tol));
    res["oracle_stability_warning"] = fd.stability_warning;
  }
  out << "picard: " << tr.iterations << " iterations, " << (tr.converged ? "converged" : "not converged")
      << (tr.non_contraction ? " (NonContraction)" : "") << "\n";
  if (tr.non_contraction) code = 2;
  return res;
}

Json cmd_norms(Context& ctx, std::ostream& out) {
  const ProblemSpec spec = problem_of(ctx);
  const PhysicalDomain dom =
      spec.domain == DomainKind::HalfLine ? PhysicalDomain::HalfLine : PhysicalDomain::Interval;
  Json res{{"s", spec.s.s},
           {"m", spec.s.m},
           {"regime", to_string(spec.s.regime)},
           {"u0", norm_json(hs_norm_physical(spec.u0, spec.s.s, dom))},
           {"g0", norm_json(ht_norm(spec.g0, spec.s.m, spec.T))}};
  if (spec.domain == DomainKind::Interval) res["h0"] = norm_json(ht_norm(spec.h0, spec.s.m, spec.T));
  const double d = data_norm(spec);
  res["data_norm"] = d;
  if (spec.s.regime == Regime::Rough) {
    res["b"] = b_midpoint(spec.s.s);
    res["alpha"] = alpha_exponent(spec.s.s, spec.p);
  }
  out << "data norm " << d << "\n";
  return res;
}

Json cmd_lifespan(Context& ctx, std::ostream& out) {
  const Json lj = ctx.config.value("lifespan", Json::object());
  double d;
  int p;
  double c;
  double T;
  double s;
  double resolution = get_or<double>(lj, "resolution", 0.0);
  if (lj.contains("data_norm")) {
    d = lj.at("data_norm").get<double>();
    p = get_or<int>(lj, "p", 3);
    c = get_or<double>(lj, "c_sp", 1.0);
    T = get_or<double>(lj, "T", 1.0);
    s = get_or<double>(lj, "s", 1.0);
  } else {
    const ProblemSpec spec = problem_of(ctx);
    d = data_norm(spec);
    p = spec.p;
    c = spec.c_sp;
    T = spec.T;
    s = spec.s.s;
    if (resolution == 0.0) resolution = spec.grid.dt();
  }
  const SobolevIndex idx = classify_regime(s, p);
  const double alpha = idx.regime == Regime::Rough ? alpha_exponent(s, p) : 0.0;
  const LifespanResult L = lifespan(d, p, c, idx.regime, alpha, T, resolution);
  Json res{{"data_norm", d},         {"p", p},         {"c_sp", c},
           {"T", T},                 {"s", s},         {"regime", to_string(idx.regime)},
           {"alpha", alpha},         {"value", L.value}, {"log_value", L.log_value},
           {"underflow", L.underflow}};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5g", L.value);
  out << buf << (L.underflow ? " (Underflow)" : "") << "\n";
  return res;
}

Json cmd_audit(Context& ctx, std::ostream& out) {
  std::vector<std::string> names = audit_scenarios();
  const Json aj = ctx.config.value("audit", Json::object());
  if (aj.contains("scenarios")) names = aj.at("scenarios").get<std::vector<std::string>>();
  Json res = Json::array();
  for (const std::string& n : names) {
    const AuditReport a = estimate_audit(n);
    res.push_back(Json{{"scenario", a.scenario},
                       {"lhs", a.lhs},
                       {"rhs", a.rhs},
                       {"ratio", a.ratio},
                       {"series", a.series},
                       {"passed", a.passed}});
    ctx.checks.push_back(check_json(a.scenario, a.passed, a.ratio, std::isfinite(a.bound) ? a.bound : -1.0));
    out << (a.passed ? "PASS  " : "FAIL  ") << a.scenario << " ratio " << a.ratio << "\n";
  }
  return res;
}

Json cmd_verify(Context& ctx, std::ostream& out) {
  AcceptanceOptions ao;
  ao.seed = ctx.seed;
  ao.threads = ctx.opts.threads;
  const Json vj = ctx.config.value("verify", Json::object());
  if (vj.contains("criteria")) ao.only = vj.at("criteria").get<std::vector<int>>();
  const std::vector<CriterionResult> rs = run_acceptance(ao, out);
  Json res = Json::array();
  for (const auto& r : rs) {
    res.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    ctx.checks.push_back(check_json(std::to_string(r.id) + " " + r.name, r.passed, r.passed ? 1.0 : 0.0, 1.0));
    ctx.timings["criterion_" + std::to_string(r.id)] = r.seconds;
  }
  return res;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Line of the first occurrence of a quoted key mentioned in an error message.
std::string anchor(const std::string& text, const std::string& message) {
  const auto q = message.find("key '");
  if (q == std::string::npos) return "";
  const auto e = message.find('\'', q + 5);
  const std::string key = "\"" + message.substr(q + 5, e - q - 5) + "\"";
  const auto at = text.find(key);
  if (at == std::string::npos) return "";
  return " (line " + std::to_string(line_of(text, at)) + ")";
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Json parse_config_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::Config,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

Json load_config(const std::string& path) { return parse_config_text(read_file(path)); }

PiecewiseLinear generate_samples(const Json& source, SampleRole role, double extent, std::size_t default_samples,
                                 const std::string& base_dir) {
  if (source.is_number()) {
    const double v = source.get<double>();
    return PiecewiseLinear(0.0, extent / static_cast<double>(default_samples - 1),
                           std::vector<double>(default_samples, v));
  }
  if (source.contains("csv")) {
    fs::path p = source.at("csv").get<std::string>();
    if (p.is_relative()) p = fs::path(base_dir) / p;
    return read_samples_csv(p.string());
  }
  const std::string name = get_or<std::string>(source, "generator", "zero");
  const auto n = get_or<std::size_t>(source, "samples", default_samples);
  const double ext = get_or<double>(source, "extent", extent);
  if (n < 2) throw Error(ErrorCode::BadGrid, "key 'samples': need at least two");
  return PiecewiseLinear::sample(generator(name, params_of(source), role), 0.0, ext, n);
}

ProblemSpec problem_from_json(const Json& j, const std::string& base_dir) {
  ProblemSpec spec;
  const std::string domain = get_or<std::string>(j, "domain", "half-line");
  if (domain == "half-line")
    spec.domain = DomainKind::HalfLine;
  else if (domain == "interval")
    spec.domain = DomainKind::Interval;
  else
    throw Error(ErrorCode::Config, "key 'domain': expected half-line or interval, got '" + domain + "'");
  spec.length = get_or<double>(j, "length", spec.domain == DomainKind::Interval ? 1.0 : 10.0);
  spec.T = get_or<double>(j, "T", 0.5);
  spec.p = get_or<int>(j, "p", 3);
  spec.s = classify_regime(get_or<double>(j, "s", 1.0), spec.p);
  const std::string form = get_or<std::string>(j, "form", "abs-power");
  if (form == "abs-power")
    spec.form = NonlinearityForm::AbsPower;
  else if (form == "power")
    spec.form = NonlinearityForm::PowerUp;
  else
    throw Error(ErrorCode::Config, "key 'form': expected power or abs-power, got '" + form + "'");
  spec.c_sp = get_or<double>(j, "c_sp", 1.0);
  spec.affine_lift = get_or<bool>(j, "affine_lift", true);

  const Json zero = Json{{"generator", "zero"}};
  spec.u0 = SampledProfile(
      generate_samples(j.value("u0", zero), SampleRole::Profile, spec.length, 1001, base_dir));
  spec.g0 = SampledSignal(generate_samples(j.value("g0", zero), SampleRole::Signal, spec.T, 1001, base_dir));
  if (spec.domain == DomainKind::Interval)
    spec.h0 = SampledSignal(generate_samples(j.value("h0", zero), SampleRole::Signal, spec.T, 1001, base_dir));
  if (j.contains("forcing")) spec.forcing = forcing_from_json(j.at("forcing"), spec.length, spec.T);

  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    Tolerances& tol = spec.tol;
    tol.quad = get_or<double>(t, "quad", tol.quad);
    tol.compat = get_or<double>(t, "compat", tol.compat);
    tol.tail = get_or<double>(t, "tail", tol.tail);
    tol.iter = get_or<double>(t, "iter", tol.iter);
    tol.max_iter = get_or<int>(t, "max_iter", tol.max_iter);
    tol.gauss_order = get_or<int>(t, "gauss_order", tol.gauss_order);
    tol.panel_phase = get_or<double>(t, "panel_phase", tol.panel_phase);
    tol.max_radius = get_or<double>(t, "max_radius", tol.max_radius);
    tol.contour_angle = get_or<double>(t, "contour_angle", tol.contour_angle);
    tol.k_switch = get_or<double>(t, "k_switch", tol.k_switch);
    tol.trace_samples = get_or<int>(t, "trace_samples", tol.trace_samples);
    tol.literal_nodes = get_or<double>(t, "literal_nodes", tol.literal_nodes);
  }
  const Json g = j.value("grid", Json::object());
  spec.grid.n_x = get_or<std::size_t>(g, "n_x", 51);
  spec.grid.n_t = get_or<std::size_t>(g, "n_t", 51);
  spec.grid.x_max = get_or<double>(g, "x_max", spec.domain == DomainKind::Interval ? spec.length : 5.0);
  spec.grid.t_max = get_or<double>(g, "t_max", spec.T);
  return spec;
}

void write_field_csv(const SolutionField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Config, "cannot write '" + path + "'");
  char buf[40];
  out << "t\\x";
  for (double x : field.x_grid) {
    std::snprintf(buf, sizeof buf, ",%.17g", x);
    out << buf;
  }
  out << "\n";
  for (std::size_t j = 0; j < field.t_grid.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", field.t_grid[j]);
    out << buf;
    for (std::size_t i = 0; i < field.x_grid.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", field.at(i, j));
      out << buf;
    }
    out << "\n";
  }
}

SolutionField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InsufficientData, path + ": empty file");
  const auto head = split(line);
  std::vector<double> xs;
  for (std::size_t i = 1; i < head.size(); ++i) xs.push_back(std::stod(head[i]));
  std::vector<double> ts;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != xs.size() + 1)
      throw Error(ErrorCode::BadGrid, path + ": row " + std::to_string(ts.size() + 2) + " has the wrong width");
    ts.push_back(std::stod(cells[0]));
    for (std::size_t i = 1; i < cells.size(); ++i) vals.push_back(std::stod(cells[i]));
  }
  SolutionField f = make_field(xs, ts);
  f.values.data = std::move(vals);
  f.refresh_traces(false);
  return f;
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  std::string text = "{}";
  Context ctx;
  ctx.opts = opts;
  try {
    if (!opts.config_path.empty()) {
      text = read_file(opts.config_path);
      ctx.base_dir = fs::path(opts.config_path).parent_path().string();
      if (ctx.base_dir.empty()) ctx.base_dir = ".";
    }
    ctx.config = parse_config_text(text);
    std::string command = opts.command.empty() ? get_or<std::string>(ctx.config, "command", "") : opts.command;
    if (command.empty()) throw Error(ErrorCode::Config, "no command given");
    ctx.seed = opts.seed ? *opts.seed : get_or<std::uint64_t>(ctx.config, "seed", 20260101);
    if (opts.threads > 0) set_default_threads(opts.threads);
    ctx.out_dir = opts.out_dir;
    fs::create_directories(ctx.out_dir);

    Json effective = ctx.config;
    effective["command"] = command;
    effective["seed"] = ctx.seed;
    if (opts.tol) effective["tol_override"] = *opts.tol;

    int code = 0;
    Json result;
    if (command == "solve-linear")
      result = cmd_solve_linear(ctx, out);
    else if (command == "solve-rd")
      result = cmd_solve_rd(ctx, out, code);
    else if (command == "norms")
      result = cmd_norms(ctx, out);
    else if (command == "lifespan")
      result = cmd_lifespan(ctx, out);
    else if (command == "audit")
      result = cmd_audit(ctx, out);
    else if (command == "verify")
      result = cmd_verify(ctx, out);
    else
      throw Error(ErrorCode::UnknownName, "unknown command '" + command + "'");

    Json report;
    report["command"] = command;
    report["version"] = kVersion;
    report["config_hash"] = hex(fnv1a(effective.dump()));
    report["seed"] = ctx.seed;
    report["result"] = result;
    report["checks"] = ctx.checks;
    report["report_hash"] = hex(fnv1a(report.dump()));
    report["timings"] = ctx.timings;
    std::ofstream(ctx.out_dir / "report.json") << report.dump(2) << "\n";
    if (code == 0 && !all_passed(ctx.checks)) code = 3;
    if (code == 3) err << "one or more checks failed; see report.json\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << anchor(text, e.what()) << "\n";
    return 1;
  }
}

}  // namespace utm
