#pragma once

#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "blab/bergman.hpp"
#include "blab/indices.hpp"
#include "blab/potential.hpp"
#include "blab/quadrature.hpp"
#include "blab/store.hpp"

namespace blab {

struct RunConfig {
  std::optional<json> domain;  // spec JSON; subcommands default to the unit disc
  double h = 1.0 / 256;
  int N = 40;
  int depth = 3;
  double tol = 1e-8;
  std::uint64_t seed = 7;
  std::optional<BallSpec> ball;
  std::vector<double> p_grid = default_p_grid();
  std::filesystem::path out = ".";
  int jobs = 0;
  bool timings = false;

  static std::vector<double> default_p_grid();  // 2, 2.25, ..., 6
  json to_json() const;
  // keys as in to_json; unknown keys rejected
  static RunConfig from_json(const json& j);
  void validate() const;
};

// extremal function interpolated below cell scale
struct FineRho {
  std::shared_ptr<const ScalarField> field;
  std::shared_ptr<const RatioInterpolant> interp;
  double operator()(cplx z) const { return (*interp)(z); }
};

// lazily built, shared fixture artifacts; safe to call from concurrent checks
class FixtureSet {
 public:
  explicit FixtureSet(RunConfig cfg, std::optional<Store> store = std::nullopt);
  const RunConfig& config() const { return cfg_; }

  std::shared_ptr<const GridDomain> grid(const DomainSpec& spec, double h);
  // config override, else the slit disc uses B(-1/2, 1/8) and others the default ball
  BallSpec ball(const DomainSpec& spec, const GridDomain& grid) const;
  std::shared_ptr<const ScalarField> extremal(const DomainSpec& spec, double h);
  FineRho rho(const DomainSpec& spec, double h);
  IndexEstimate alpha(const DomainSpec& spec, double h);

  std::shared_ptr<const QuadratureRule> fitted(const DomainSpec& spec);
  // fitted disc rule moved by the Riemann map so that w is the image of 0
  std::shared_ptr<const QuadratureRule> rule_near(const DomainSpec& spec, cplx w);
  std::shared_ptr<const OrthoBasis> basis(const DomainSpec& spec, int N);
  // closed form when a Riemann map is known, else the Gram basis
  std::shared_ptr<const PlanarKernel> kernel(const DomainSpec& spec);
  LpOptions lp_options(const DomainSpec& spec) const;

 private:
  template <class T, class F>
  std::shared_ptr<const T> memo(const std::string& key, F make);

  RunConfig cfg_;
  std::optional<Store> store_;
  std::mutex m_;
  std::map<std::string, std::shared_future<std::shared_ptr<const void>>> cache_;
};

}  // namespace blab
