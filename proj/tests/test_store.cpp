#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "blab/error.hpp"
#include "blab/io.hpp"
#include "blab/store.hpp"

using namespace blab;
namespace fs = std::filesystem;

namespace {
fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("blab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}
}  // namespace

TEST_CASE("blob framing") {
  std::string payload = "abc\0def";
  std::string blob = encode_blob(payload);
  CHECK(blob.substr(0, 4) == "BLAB");
  REQUIRE(decode_blob(blob).has_value());
  CHECK(*decode_blob(blob) == payload);
  CHECK_FALSE(decode_blob(encode_blob(payload, kFormatVersion + 1)).has_value());
  std::string bad = blob;
  bad[14] ^= 1;
  CHECK_THROWS_AS(decode_blob(bad), Error);
  CHECK_THROWS_AS(decode_blob("BL"), Error);
}

TEST_CASE("cache keys are stable") {
  json a = {{"h", 0.5}, {"kind", "x"}};
  CHECK(cache_key(a) == cache_key(json::parse(a.dump())));
  CHECK(cache_key(a).size() == 16);
  CHECK(cache_key(a) != cache_key({{"h", 0.25}, {"kind", "x"}}));
}

TEST_CASE("store put and get") {
  Store s(fresh_dir("store"));
  CHECK_FALSE(s.get("k1").has_value());
  s.put("k1", "hello");
  auto t0 = fs::last_write_time(s.path_for("k1"));
  s.put("k1", "hello");
  CHECK(fs::last_write_time(s.path_for("k1")) == t0);
  CHECK(*s.get("k1") == "hello");
  write_atomic(s.path_for("k1"), "garbage that is not a blob");
  CHECK_FALSE(s.get("k1").has_value());
}

TEST_CASE("store root from the environment") {
  fs::path p = fresh_dir("env");
  ::setenv("BERGMAN_LAB_CACHE", p.c_str(), 1);
  CHECK(Store::from_env("/nonexistent").root() == p);
  ::unsetenv("BERGMAN_LAB_CACHE");
  CHECK(Store::from_env("fallback").root() == fs::path("fallback"));
}

TEST_CASE("field round trip") {
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::slit_disc(), 1.0 / 32));
  ScalarField f = sample_field(g, [](cplx z) { return z.real() * z.imag(); }, FieldKind::Generic);
  f.meta = {{"note", "x"}};
  ScalarField r = deserialize_field(serialize_field(f));
  CHECK(r.grid->fingerprint() == g->fingerprint());
  CHECK(r.kind == f.kind);
  CHECK(r.meta == f.meta);
  for (std::size_t p = 0; p < g->size(); ++p)
    if (g->inside(p)) CHECK(r[p] == f[p]);
  std::istringstream csv(field_csv(f));
  std::string header;
  std::getline(csv, header);
  CHECK(header == "i,j,x,y,value");
}

TEST_CASE("basis round trip") {
  auto spec = DomainSpec::unit_disc();
  QuadratureRule q = fitted_quadrature(spec);
  OrthoBasis b = gram(q, 8, spec);
  OrthoBasis r = deserialize_basis(serialize_basis(b));
  CHECK(r.exponents == b.exponents);
  CHECK(r.K(0.3, 0.1) == b.K(0.3, 0.1));
}
