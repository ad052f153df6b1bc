#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blab/bergman.hpp"
#include "blab/capacity.hpp"
#include "blab/conformal.hpp"
#include "blab/dynamics.hpp"
#include "blab/error.hpp"
#include "blab/fixtures.hpp"
#include "blab/indices.hpp"
#include "blab/io.hpp"
#include "blab/potential.hpp"
#include "blab/store.hpp"
#include "blab/verify.hpp"

namespace fs = std::filesystem;

namespace blab::cli {

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

cplx parse_point(const std::string& s) {
  std::stringstream ss(s);
  double x = 0, y = 0;
  char comma = 0;
  if (!(ss >> x)) throw Error(Errc::Usage, "bad point '" + s + "', expected x,y");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> y)) throw Error(Errc::Usage, "bad point '" + s + "', expected x,y");
  }
  return {x, y};
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    // a:b:step expands to a range
    auto c1 = tok.find(':');
    if (c1 != std::string::npos) {
      auto c2 = tok.find(':', c1 + 1);
      if (c2 == std::string::npos) throw Error(Errc::Usage, "range needs a:b:step");
      double a = std::stod(tok.substr(0, c1)), b = std::stod(tok.substr(c1 + 1, c2 - c1 - 1)),
             st = std::stod(tok.substr(c2 + 1));
      if (!(st > 0)) throw Error(Errc::Usage, "range step must be positive");
      for (int i = 0; a + i * st <= b + 1e-12; ++i) v.push_back(a + i * st);
    } else {
      v.push_back(std::stod(tok));
    }
  }
  return v;
}

json parse_json_arg(const std::string& s) {
  std::string text = s;
  if (!s.empty() && s[0] != '{' && fs::exists(s)) text = read_file(s);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::Usage, std::string("bad JSON: ") + e.what());
  }
}

json domain_json(const std::string& s) {
  if (s == "unit_disc" || s == "disc") return {{"type", "unit_disc"}};
  if (s == "slit_disc" || s == "slit") return {{"type", "slit_disc"}};
  if (s == "square") return {{"type", "square"}, {"half_side", 1.0}};
  if (s == "annulus") return {{"type", "annulus"}, {"r_inner", 0.5}};
  if (s == "bidisc") return {{"type", "product"}, {"left", {{"type", "unit_disc"}}}, {"right", {{"type", "unit_disc"}}}};
  return parse_json_arg(s);
}

std::string timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y%m%dT%H%M%SZ");
  return os.str();
}

fs::path new_report_dir(const fs::path& out) {
  const fs::path base = out / "reports";
  const std::string ts = timestamp();
  fs::path p = base / ts;
  for (int i = 1; fs::exists(p); ++i) p = base / (ts + "-" + std::to_string(i));
  fs::create_directories(p);
  return p;
}

struct Flags {
  std::string domain, config, p_grid, ball, out;
  double h = 0, tol = 0;
  int N = 0, depth = -1, jobs = -1;
  long long seed = -1;
  bool timings = false;
};

// config file first, then flags that were given
RunConfig build_config(const Flags& f, const CLI::App& app) {
  RunConfig c;
  if (!f.config.empty()) c = RunConfig::from_json(parse_json_arg(f.config));
  auto given = [&](const char* name) { return app.count(name) > 0; };
  if (given("--domain")) c.domain = domain_json(f.domain);
  if (given("--h")) c.h = f.h;
  if (given("--N")) c.N = f.N;
  if (given("--depth")) c.depth = f.depth;
  if (given("--tol")) c.tol = f.tol;
  if (given("--seed")) c.seed = static_cast<std::uint64_t>(f.seed);
  if (given("--p-grid")) c.p_grid = parse_list(f.p_grid);
  if (given("--ball")) c.ball = BallSpec::from_json(parse_json_arg(f.ball));
  if (given("--out")) c.out = f.out;
  if (given("--jobs")) c.jobs = f.jobs;
  c.timings = f.timings;
  c.validate();
  return c;
}

DomainSpec domain_of(const RunConfig& c) {
  return c.domain ? DomainSpec::from_json(*c.domain) : DomainSpec::unit_disc();
}

void emit(const RunConfig& c, const std::string& name, json report, std::ostream& out) {
  report["config"] = c.to_json();
  const fs::path dir = new_report_dir(c.out);
  write_atomic(dir / (name + ".json"), report.dump(2) + "\n");
  out << report.dump(2) << "\n";
}

void table(const RunConfig& c, const std::string& name, const std::string& csv) {
  write_atomic(c.out / "tables" / (name + ".csv"), csv);
}

std::shared_ptr<const PlanarKernel> kernel_for(FixtureSet& fx, const DomainSpec& spec, const std::string& source) {
  if (source == "conformal") {
    auto m = conformal_model(spec);
    if (!m) throw Error(Errc::UnsupportedSpec, "no closed-form kernel for " + spec.type_name());
    return std::make_shared<ConformalKernel>(m);
  }
  if (source == "gram") return fx.basis(spec, fx.config().N);
  return fx.kernel(spec);
}

std::shared_ptr<const QuadratureRule> rule_for(FixtureSet& fx, const DomainSpec& spec, const std::string& rule) {
  if (rule == "grid") {
    auto g = fx.grid(spec, fx.config().h);
    return std::make_shared<QuadratureRule>(build_quadrature(*g, fx.config().depth));
  }
  return fx.fitted(spec);
}

json scan_json(const LpScan& s) {
  json j = {{"p", s.p},
            {"levels", s.levels},
            {"partial_sums", s.partial_sums},
            {"fit_levels", s.fit_levels},
            {"ratios", s.ratios},
            {"verdict", verdict_name(s.verdict)},
            {"tail_exponent", num(s.tail_exponent)},
            {"total", num(s.total)}};
  return j;
}

std::string latest_report_dir(const fs::path& out) {
  const fs::path base = out / "reports";
  if (!fs::exists(base)) throw Error(Errc::IoFailure, "no reports under " + base.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(base))
    if (e.is_directory()) dirs.push_back(e.path());
  if (dirs.empty()) throw Error(Errc::IoFailure, "no reports under " + base.string());
  std::sort(dirs.begin(), dirs.end(), [](const fs::path& a, const fs::path& b) {
    return fs::last_write_time(a) != fs::last_write_time(b) ? fs::last_write_time(a) < fs::last_write_time(b)
                                                              : a < b;
  });
  return dirs.back().string();
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bergman kernel and pluripotential numerics"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  app.fallthrough();
  Flags f;
  app.add_option("--domain", f.domain, "unit_disc | slit_disc | square | annulus | bidisc | JSON | file");
  app.add_option("--h", f.h, "grid spacing");
  app.add_option("--N", f.N, "polynomial degree of the Gram basis");
  app.add_option("--depth", f.depth, "boundary quadrisection depth of the grid rule");
  app.add_option("--tol", f.tol, "solver tolerance");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--p-grid", f.p_grid, "list of p, e.g. 2:6:0.25");
  app.add_option("--ball", f.ball, "reference ball JSON {\"center\":[x,y],\"radius\":r}");
  app.add_option("--out", f.out, "output directory");
  app.add_option("--jobs", f.jobs, "concurrent checks");
  app.add_option("--config", f.config, "flat JSON config file; flags win");
  app.add_flag("--timings", f.timings, "include runtime_s in reports");

  auto* c_ext = app.add_subcommand("extremal", "relative extremal function of the reference ball");
  auto* c_green = app.add_subcommand("green", "Green function with a pole");
  std::string pole = "0,0";
  c_green->add_option("--pole", pole, "x,y");
  auto* c_kernel = app.add_subcommand("kernel", "Bergman kernel at a pair of points");
  std::string kz = "0,0", kw = "0,0", ksrc = "auto", krule = "fitted";
  c_kernel->add_option("--z", kz, "x,y");
  c_kernel->add_option("--w", kw, "x,y");
  c_kernel->add_option("--source", ksrc, "auto | gram | conformal")->check(CLI::IsMember({"auto", "gram", "conformal"}));
  c_kernel->add_option("--rule", krule, "fitted | grid")->check(CLI::IsMember({"fitted", "grid"}));
  auto* c_lp = app.add_subcommand("lp", "collar scan of |K(., w)|^p");
  std::string lw = "0,0";
  double lp = 4;
  c_lp->add_option("--w", lw, "x,y");
  c_lp->add_option("--p", lp, "exponent");
  c_lp->add_option("--source", ksrc, "auto | gram | conformal")->check(CLI::IsMember({"auto", "gram", "conformal"}));
  auto* c_alpha = app.add_subcommand("alpha", "hyperconvexity index estimate");
  auto* c_beta = app.add_subcommand("beta", "integrability index estimate");
  c_beta->add_option("--w", lw, "x,y");
  c_beta->add_option("--source", ksrc, "auto | gram | conformal")->check(CLI::IsMember({"auto", "gram", "conformal"}));
  auto* c_metric = app.add_subcommand("metric", "distances between two points");
  std::string z0 = "0,0", z1 = "0.5,0";
  c_metric->add_option("--z0", z0, "x,y");
  c_metric->add_option("--z1", z1, "x,y");
  c_metric->add_option("--source", ksrc, "auto | gram | conformal")->check(CLI::IsMember({"auto", "gram", "conformal"}));
  auto* c_cap = app.add_subcommand("capacity", "Fekete capacity of a compact set");
  std::string set = R"({"type":"interval","a":-1,"b":1})";
  int cn = 64, restarts = 8;
  c_cap->add_option("--set", set, "compact set JSON");
  c_cap->add_option("--n", cn, "number of points");
  c_cap->add_option("--restarts", restarts, "multistart count");
  auto* c_basin = app.add_subcommand("basin", "basin of infinity of a polynomial");
  std::string poly = "1,0,-2";
  int levels = 8, rays = 64;
  c_basin->add_option("--poly", poly, "coefficients from the leading one down");
  c_basin->add_option("--levels", levels, "dyadic distance levels");
  c_basin->add_option("--rays", rays, "gradient lines");
  auto* c_verify = app.add_subcommand("verify", "run named checks");
  std::vector<std::string> ids;
  c_verify->add_option("check", ids, "CHECK_ID ... or all")->required();
  auto* c_report = app.add_subcommand("report", "bundle the last report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    RunConfig cfg = build_config(f, app);
    FixtureSet fx(cfg, Store::from_env(cfg.out));
    const DomainSpec spec = domain_of(cfg);

    if (*c_ext) {
      auto field = fx.extremal(spec, cfg.h);
      table(cfg, "extremal", field_csv(*field));
      double lo = 0;
      for (double v : field->values)
        if (std::isfinite(v)) lo = std::min(lo, v);
      emit(cfg, "extremal",
           {{"domain", spec.to_json()}, {"grid", field->grid->fingerprint()}, {"cells", field->grid->count()},
            {"ball", field->meta["ball"]}, {"min", lo}, {"table", "tables/extremal.csv"}},
           out);
    } else if (*c_green) {
      auto g = fx.grid(spec, cfg.h);
      SolveStats st;
      GreenField gf = green_numeric(g, parse_point(pole), cfg.tol, &st);
      table(cfg, "green", field_csv(gf.field));
      emit(cfg, "green",
           {{"domain", spec.to_json()}, {"grid", g->fingerprint()}, {"pole", {gf.pole.real(), gf.pole.imag()}},
            {"sweeps", st.sweeps}, {"table", "tables/green.csv"}},
           out);
    } else if (*c_kernel) {
      const cplx z = parse_point(kz), w = parse_point(kw);
      json rep = {{"domain", spec.to_json()}, {"z", {z.real(), z.imag()}}, {"w", {w.real(), w.imag()}}};
      std::shared_ptr<const PlanarKernel> k;
      if (ksrc == "conformal") {
        k = kernel_for(fx, spec, ksrc);
      } else {
        auto q = rule_for(fx, spec, krule);
        auto b = std::make_shared<OrthoBasis>(gram(*q, cfg.N, spec));
        rep["effective_dim"] = b->effective_dim();
        rep["orthonormality_defect"] = orthonormality_defect(*b, *q);
        rep["rule"] = {{"kind", q->kind}, {"nodes", q->size()}, {"fingerprint", q->fingerprint}};
        k = b;
      }
      KernelValue v = kernel(*k, z, w);
      rep["source"] = k->source();
      rep["K_zw"] = {v.K_zw.real(), v.K_zw.imag()};
      rep["K_z"] = v.K_z;
      rep["K_w"] = v.K_w;
      rep["B"] = v.B;
      if (auto m = conformal_model(spec)) {
        cplx e = m->kernel(z, w);
        rep["exact_K_zw"] = {e.real(), e.imag()};
        rep["rel_err"] = std::abs(v.K_zw - e) / std::abs(e);
      }
      emit(cfg, "kernel", rep, out);
    } else if (*c_lp) {
      auto k = kernel_for(fx, spec, ksrc);
      LpScan s = lp_collar_scan(*k, parse_point(lw), lp, *fx.fitted(spec), fx.lp_options(spec));
      json rep = scan_json(s);
      rep["domain"] = spec.to_json();
      rep["source"] = k->source();
      emit(cfg, "lp", rep, out);
    } else if (*c_alpha) {
      IndexEstimate e = fx.alpha(spec, cfg.h);
      auto field = fx.extremal(spec, cfg.h);
      emit(cfg, "alpha", {{"domain", spec.to_json()}, {"ball", field->meta["ball"]}, {"estimate", e.to_json()}}, out);
    } else if (*c_beta) {
      auto k = kernel_for(fx, spec, ksrc);
      IndexEstimate e = estimate_beta(*k, *fx.fitted(spec), parse_point(lw), cfg.p_grid, fx.lp_options(spec));
      emit(cfg, "beta", {{"domain", spec.to_json()}, {"source", k->source()}, {"estimate", e.to_json()}}, out);
    } else if (*c_metric) {
      auto k = kernel_for(fx, spec, ksrc);
      auto g = fx.grid(spec, cfg.h);
      const PlanarKernel* kp = k.get();
      Distances d = distances([kp](cplx z) { return kp->metric(z); }, *k, g, parse_point(z0), parse_point(z1));
      emit(cfg, "metric",
           {{"domain", spec.to_json()}, {"source", k->source()}, {"d_B_upper", d.d_B_upper}, {"d_S", d.d_S},
            {"D_B", num(d.D_B)}, {"d_K_upper", d.d_K_upper}},
           out);
    } else if (*c_cap) {
      CompactSetSpec cs = CompactSetSpec::from_json(parse_json_arg(set));
      FeketeOptions opt;
      opt.restarts = restarts;
      opt.seed = cfg.seed;
      opt.jobs = cfg.jobs;
      CapacityEstimate e = capacity_estimate(cs, cn, opt);
      std::string csv = "x,y\n";
      for (cplx p : e.best.points) csv += fmt17(p.real()) + "," + fmt17(p.imag()) + "\n";
      table(cfg, "fekete_points", csv);
      json rep = {{"set", cs.to_json()}, {"capacity", e.value}, {"n", e.n}, {"d_n", e.d_n},
                  {"restart", e.best.restart}, {"table", "tables/fekete_points.csv"}};
      if (std::holds_alternative<CantorLinear>(cs.variant())) {
        // level-L prefix sets bracket the limit set; report both neighbours
        CantorLinear c = std::get<CantorLinear>(cs.variant());
        json bracket = json::object();
        for (int L : {c.levels - 1, c.levels}) {
          if (L < 0) continue;
          CantorLinear cl = c;
          cl.levels = L;
          bracket["L" + std::to_string(L)] = capacity_estimate(CompactSetSpec(cl), cn, opt).value;
        }
        rep["bracket"] = bracket;
        if (c.ratios.empty() && c.levels > 0) {
          const double dim = moran_dimension({c.lambda, c.lambda});
          rep["dim"] = dim;
          rep["beta_upper"] = beta_upper_planar(dim);
        }
      }
      emit(cfg, "capacity", rep, out);
    } else if (*c_basin) {
      PolynomialMap q = PolynomialMap::parse(poly);
      BasinOptions bo;
      bo.rays = rays;
      bo.levels = levels;
      bo.seed = cfg.seed;
      BasinFit fit = basin_alpha(q, bo);
      std::string csv = "level,x,y,g,grad_x,grad_y,dist_lo,dist_hi\n";
      for (const auto& s : fit.samples)
        csv += std::to_string(s.level) + "," + fmt17(s.w.real()) + "," + fmt17(s.w.imag()) + "," + fmt17(s.g) + "," +
               fmt17(s.grad.real()) + "," + fmt17(s.grad.imag()) + "," + fmt17(s.dist_lo) + "," + fmt17(s.dist_hi) +
               "\n";
      table(cfg, "basin_samples", csv);
      emit(cfg, "basin",
           {{"polynomial", q.to_json()}, {"estimate", fit.estimate.to_json()},
            {"hyperbolicity", "assumed for the chosen map, not checked"}, {"table", "tables/basin_samples.csv"}},
           out);
    } else if (*c_verify) {
      std::vector<std::string> run_ids;
      for (const auto& id : ids) {
        if (id == "all") run_ids.insert(run_ids.end(), check_ids().begin(), check_ids().end());
        else run_ids.push_back(id);
      }
      for (const auto& id : run_ids)
        if (std::find(check_ids().begin(), check_ids().end(), id) == check_ids().end())
          throw Error(Errc::Usage, "unknown check '" + id + "'");
      auto reports = verify_many(run_ids, fx, cfg.jobs);
      const fs::path dir = new_report_dir(cfg.out);
      json summary = json::object();
      bool all_pass = true;
      for (const auto& r : reports) {
        write_atomic(dir / (r.check_id + ".json"), r.to_json(cfg.timings).dump(2) + "\n");
        summary[r.check_id] = status_name(r.status);
        all_pass = all_pass && r.status == Status::Pass;
        out << std::left << std::setw(14) << r.check_id << " " << status_name(r.status) << "\n";
      }
      write_atomic(dir / "summary.json", summary.dump(2) + "\n");
      out << "reports: " << dir.string() << "\n";
      return all_pass ? 0 : 1;
    } else if (*c_report) {
      const fs::path dir = latest_report_dir(cfg.out);
      json bundle = json::object();
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json" || e.path().filename() == "bundle.json") continue;
        bundle[e.path().stem().string()] = json::parse(read_file(e.path()));
      }
      write_atomic(fs::path(dir) / "bundle.json", bundle.dump(2) + "\n");
      out << (fs::path(dir) / "bundle.json").string() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace blab::cli
