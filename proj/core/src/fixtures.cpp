#include "blab/fixtures.hpp"

#include <cmath>

#include "blab/conformal.hpp"
#include "blab/error.hpp"
#include "blab/io.hpp"

namespace blab {

std::vector<double> RunConfig::default_p_grid() {
  std::vector<double> p;
  for (int i = 0; i <= 16; ++i) p.push_back(2 + 0.25 * i);
  return p;
}

json RunConfig::to_json() const {
  json j = {{"h", h}, {"N", N}, {"depth", depth}, {"tol", tol}, {"seed", seed}, {"p_grid", p_grid}};
  if (domain) j["domain"] = *domain;
  if (ball) j["ball"] = ball->to_json();
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw Error(Errc::InvalidSpec, "config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "domain") c.domain = v;
      else if (k == "h") c.h = v.get<double>();
      else if (k == "N") c.N = v.get<int>();
      else if (k == "depth") c.depth = v.get<int>();
      else if (k == "tol") c.tol = v.get<double>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "ball") c.ball = BallSpec::from_json(v);
      else if (k == "p_grid") c.p_grid = v.get<std::vector<double>>();
      else if (k == "out") c.out = v.get<std::string>();
      else if (k == "jobs") c.jobs = v.get<int>();
      else throw Error(Errc::InvalidSpec, "unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, e.what());
  }
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (!(h > 0)) throw Error(Errc::NonPositiveSpacing, "h must be positive");
  if (N < 1) throw Error(Errc::InvalidSpec, "N must be >= 1");
  if (depth < 0 || depth > 6) throw Error(Errc::InvalidSpec, "depth must lie in 0..6");
  if (!(tol > 0)) throw Error(Errc::InvalidSpec, "tol must be positive");
  if (p_grid.empty()) throw Error(Errc::InvalidSpec, "p_grid is empty");
  for (std::size_t i = 0; i < p_grid.size(); ++i)
    if (p_grid[i] < 2 || (i > 0 && p_grid[i] <= p_grid[i - 1]))
      throw Error(Errc::InvalidSpec, "p_grid must be strictly ascending with minimum >= 2");
  if (domain) DomainSpec::from_json(*domain);
  if (jobs < 0) throw Error(Errc::InvalidSpec, "jobs must be >= 0");
}

FixtureSet::FixtureSet(RunConfig cfg, std::optional<Store> store) : cfg_(std::move(cfg)), store_(std::move(store)) {}

template <class T, class F>
std::shared_ptr<const T> FixtureSet::memo(const std::string& key, F make) {
  std::promise<std::shared_ptr<const void>> prom;
  std::shared_future<std::shared_ptr<const void>> fut;
  bool owner = false;
  {
    std::lock_guard<std::mutex> lk(m_);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      fut = prom.get_future().share();
      cache_.emplace(key, fut);
      owner = true;
    } else {
      fut = it->second;
    }
  }
  if (owner) {
    try {
      prom.set_value(std::static_pointer_cast<const void>(std::shared_ptr<const T>(make())));
    } catch (...) {
      prom.set_exception(std::current_exception());
    }
  }
  return std::static_pointer_cast<const T>(fut.get());
}

std::shared_ptr<const GridDomain> FixtureSet::grid(const DomainSpec& spec, double h) {
  return memo<GridDomain>("grid|" + spec.canonical() + "|" + fmt17(h),
                          [&] { return std::make_shared<GridDomain>(rasterize(spec, h)); });
}

BallSpec FixtureSet::ball(const DomainSpec& spec, const GridDomain& grid) const {
  if (cfg_.ball) return *cfg_.ball;
  if (std::holds_alternative<SlitDisc>(spec.variant())) return BallSpec{cplx(-0.5, 0), 0.125};
  return default_ball(grid);
}

std::shared_ptr<const ScalarField> FixtureSet::extremal(const DomainSpec& spec, double h) {
  auto g = grid(spec, h);
  const BallSpec b = ball(spec, *g);
  const json params = {{"artifact", "extremal"}, {"spec", spec.to_json()}, {"h", h},
                       {"ball", b.to_json()}, {"tol", cfg_.tol}, {"version", kFormatVersion}};
  const std::string key = cache_key(params);
  return memo<ScalarField>("extremal|" + key, [&]() -> std::shared_ptr<const ScalarField> {
    if (store_) {
      if (auto payload = store_->get(key)) {
        try {
          auto f = std::make_shared<ScalarField>(deserialize_field(*payload));
          if (f->grid->fingerprint() == g->fingerprint()) {
            f->grid = g;
            return f;
          }
        } catch (const Error&) {
        }
      }
    }
    auto f = std::make_shared<ScalarField>(extremal_numeric(g, b, cfg_.tol));
    if (store_) store_->put(key, serialize_field(*f));
    return f;
  });
}

FineRho FixtureSet::rho(const DomainSpec& spec, double h) {
  auto f = extremal(spec, h);
  auto interp = memo<RatioInterpolant>("rho|" + spec.canonical() + "|" + fmt17(h), [&] {
    const BallSpec b = BallSpec::from_json(f->meta["ball"]);
    std::function<double(cplx)> templ;
    if (auto m = conformal_model(spec)) {
      templ = [m, c = b.center](cplx z) { return m->green(z, c); };
    } else {
      templ = [s = spec](cplx z) { return -s.boundary_distance_raw(z); };
    }
    return std::make_shared<RatioInterpolant>(*f, templ);
  });
  return FineRho{f, interp};
}

IndexEstimate FixtureSet::alpha(const DomainSpec& spec, double h) {
  return *memo<IndexEstimate>("alpha|" + spec.canonical() + "|" + fmt17(h),
                              [&] { return std::make_shared<IndexEstimate>(estimate_alpha(*extremal(spec, h))); });
}

std::shared_ptr<const QuadratureRule> FixtureSet::fitted(const DomainSpec& spec) {
  return memo<QuadratureRule>("fitted|" + spec.canonical(),
                              [&] { return std::make_shared<QuadratureRule>(fitted_quadrature(spec)); });
}

std::shared_ptr<const QuadratureRule> FixtureSet::rule_near(const DomainSpec& spec, cplx w) {
  auto m = conformal_model(spec);
  if (!m) throw Error(Errc::FixtureUnavailable, "no Riemann map for " + spec.type_name());
  auto disc = fitted(DomainSpec::unit_disc());
  return memo<QuadratureRule>("near|" + spec.canonical() + "|" + fmt17(w.real()) + "," + fmt17(w.imag()), [&] {
    const cplx a = m->map(w);
    auto F = [m, a](cplx u) { return m->inverse(mobius(a, u)); };
    auto dF = [m, a](cplx u) { return m->inverse_deriv(mobius(a, u)) * mobius_deriv(a, u); };
    return std::make_shared<QuadratureRule>(pushforward(*disc, F, dF, spec));
  });
}

std::shared_ptr<const OrthoBasis> FixtureSet::basis(const DomainSpec& spec, int N) {
  auto q = fitted(spec);
  const json params = {{"artifact", "basis"}, {"spec", spec.to_json()}, {"N", N},
                       {"quadrature", q->fingerprint}, {"version", kFormatVersion}};
  const std::string key = cache_key(params);
  return memo<OrthoBasis>("basis|" + key, [&]() -> std::shared_ptr<const OrthoBasis> {
    if (store_) {
      if (auto payload = store_->get(key)) {
        try {
          return std::make_shared<OrthoBasis>(deserialize_basis(*payload));
        } catch (const Error&) {
        }
      }
    }
    auto b = std::make_shared<OrthoBasis>(gram(*q, N, spec));
    if (store_) store_->put(key, serialize_basis(*b));
    return b;
  });
}

std::shared_ptr<const PlanarKernel> FixtureSet::kernel(const DomainSpec& spec) {
  if (auto m = conformal_model(spec)) return std::make_shared<ConformalKernel>(m);
  return basis(spec, cfg_.N);
}

LpOptions FixtureSet::lp_options(const DomainSpec& spec) const {
  LpOptions o;
  // closed-form kernels on fitted rules resolve collars far below the grid scale
  o.min_width = conformal_model(spec) ? std::ldexp(1.0, -12) : 4 * cfg_.h;
  return o;
}

}  // namespace blab
