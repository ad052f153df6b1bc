#include "blab/store.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>

#include "blab/error.hpp"
#include "blab/hash.hpp"
#include "blab/io.hpp"

namespace blab {

namespace {

constexpr char kMagic[4] = {'B', 'L', 'A', 'B'};

template <class T>
void put_raw(std::string& out, const T& v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get_raw(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(Errc::CorruptEntry, "truncated payload");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

// u64 header length | header JSON | raw sections
std::string with_header(const json& header, const std::string& body) {
  std::string out;
  std::string h = header.dump();
  put_raw<std::uint64_t>(out, h.size());
  out += h;
  out += body;
  return out;
}

json read_header(const std::string& in, std::size_t& pos) {
  auto n = get_raw<std::uint64_t>(in, pos);
  if (pos + n > in.size()) throw Error(Errc::CorruptEntry, "truncated header");
  json j = json::parse(in.substr(pos, n));
  pos += n;
  return j;
}

void put_matrix(std::string& out, const Eigen::MatrixXcd& m) {
  put_raw<std::uint64_t>(out, m.rows());
  put_raw<std::uint64_t>(out, m.cols());
  out.append(reinterpret_cast<const char*>(m.data()), sizeof(cplx) * m.size());
}

Eigen::MatrixXcd get_matrix(const std::string& in, std::size_t& pos) {
  auto r = get_raw<std::uint64_t>(in, pos);
  auto c = get_raw<std::uint64_t>(in, pos);
  if (pos + sizeof(cplx) * r * c > in.size()) throw Error(Errc::CorruptEntry, "truncated matrix");
  Eigen::MatrixXcd m(r, c);
  std::memcpy(m.data(), in.data() + pos, sizeof(cplx) * r * c);
  pos += sizeof(cplx) * r * c;
  return m;
}

}  // namespace

std::string cache_key(const json& params) { return hex64(fnv1a64(params.dump())); }

std::string encode_blob(const std::string& payload, std::uint8_t version) {
  std::string out(kMagic, 4);
  out.push_back(static_cast<char>(version));
  put_raw<std::uint64_t>(out, payload.size());
  out += payload;
  put_raw<std::uint64_t>(out, fnv1a64(payload));
  return out;
}

std::optional<std::string> decode_blob(const std::string& blob) {
  if (blob.size() < 21 || std::memcmp(blob.data(), kMagic, 4) != 0)
    throw Error(Errc::CorruptEntry, "bad magic");
  if (static_cast<std::uint8_t>(blob[4]) != kFormatVersion) return std::nullopt;
  std::size_t pos = 5;
  auto n = get_raw<std::uint64_t>(blob, pos);
  if (pos + n + 8 != blob.size()) throw Error(Errc::CorruptEntry, "length mismatch");
  std::string payload = blob.substr(pos, n);
  pos += n;
  if (get_raw<std::uint64_t>(blob, pos) != fnv1a64(payload)) throw Error(Errc::CorruptEntry, "digest mismatch");
  return payload;
}

Store::Store(std::filesystem::path root) : root_(std::move(root)) {}

Store Store::from_env(const std::filesystem::path& fallback) {
  const char* env = std::getenv("BERGMAN_LAB_CACHE");
  return Store(env && *env ? std::filesystem::path(env) : fallback);
}

std::filesystem::path Store::path_for(const std::string& key) const { return cache_dir() / (key + ".bin"); }

void Store::put(const std::string& key, const std::string& payload) const {
  const std::string blob = encode_blob(payload);
  const auto p = path_for(key);
  std::error_code ec;
  if (std::filesystem::exists(p, ec) && std::filesystem::file_size(p, ec) == blob.size()) {
    try {
      if (read_file(p) == blob) return;
    } catch (const Error&) {
    }
  }
  write_atomic(p, blob);
}

std::optional<std::string> Store::get(const std::string& key) const {
  const auto p = path_for(key);
  std::error_code ec;
  if (!std::filesystem::exists(p, ec)) return std::nullopt;
  try {
    auto r = decode_blob(read_file(p));
    if (!r) std::cerr << "warning: cache entry " << key << " has another format version, ignored\n";
    return r;
  } catch (const Error& e) {
    std::cerr << "warning: cache entry " << key << " unusable (" << e.what() << ")\n";
    return std::nullopt;
  }
}

std::string serialize_field(const ScalarField& f) {
  json h = {{"type", "field"},
            {"spec", f.grid->spec.to_json()},
            {"h", f.grid->h},
            {"grid", f.grid->fingerprint()},
            {"kind", field_kind_name(f.kind)},
            {"tol", f.tol},
            {"meta", f.meta},
            {"n", f.values.size()}};
  std::string body(reinterpret_cast<const char*>(f.values.data()), sizeof(double) * f.values.size());
  return with_header(h, body);
}

ScalarField deserialize_field(const std::string& payload) {
  std::size_t pos = 0;
  json h = read_header(payload, pos);
  if (h.value("type", "") != "field") throw Error(Errc::CorruptEntry, "not a field payload");
  auto grid = std::make_shared<GridDomain>(rasterize(DomainSpec::from_json(h["spec"]), h["h"].get<double>()));
  if (grid->fingerprint() != h["grid"].get<std::string>())
    throw Error(Errc::CorruptEntry, "grid fingerprint differs after rasterization");
  ScalarField f;
  f.grid = grid;
  f.kind = field_kind_from(h["kind"].get<std::string>());
  f.tol = h["tol"].get<double>();
  f.meta = h["meta"];
  const std::size_t n = h["n"].get<std::size_t>();
  if (n != grid->size() || pos + n * sizeof(double) != payload.size())
    throw Error(Errc::CorruptEntry, "field size mismatch");
  f.values.resize(n);
  std::memcpy(f.values.data(), payload.data() + pos, n * sizeof(double));
  return f;
}

std::string serialize_basis(const OrthoBasis& b) {
  json h = {{"type", "basis"},       {"N", b.N},
            {"center", {b.center.real(), b.center.imag()}},
            {"scale", b.scale},      {"candidates", b.candidates},
            {"exponents", b.exponents}, {"domain", b.domain_fp},
            {"quadrature", b.quad_fp}};
  std::string body;
  put_raw<std::uint64_t>(body, b.pivots.size());
  body.append(reinterpret_cast<const char*>(b.pivots.data()), sizeof(double) * b.pivots.size());
  put_matrix(body, b.gram);
  put_matrix(body, b.factor);
  return with_header(h, body);
}

OrthoBasis deserialize_basis(const std::string& payload) {
  std::size_t pos = 0;
  json h = read_header(payload, pos);
  if (h.value("type", "") != "basis") throw Error(Errc::CorruptEntry, "not a basis payload");
  OrthoBasis b;
  b.N = h["N"].get<int>();
  b.center = {h["center"][0].get<double>(), h["center"][1].get<double>()};
  b.scale = h["scale"].get<double>();
  b.candidates = h["candidates"].get<std::vector<int>>();
  b.exponents = h["exponents"].get<std::vector<int>>();
  b.domain_fp = h["domain"].get<std::string>();
  b.quad_fp = h["quadrature"].get<std::string>();
  auto np = get_raw<std::uint64_t>(payload, pos);
  if (pos + np * sizeof(double) > payload.size()) throw Error(Errc::CorruptEntry, "truncated pivots");
  b.pivots.resize(np);
  std::memcpy(b.pivots.data(), payload.data() + pos, np * sizeof(double));
  pos += np * sizeof(double);
  b.gram = get_matrix(payload, pos);
  b.factor = get_matrix(payload, pos);
  if (pos != payload.size()) throw Error(Errc::CorruptEntry, "trailing bytes");
  return b;
}

std::string field_csv(const ScalarField& f) {
  std::string out = "i,j,x,y,value\n";
  const GridDomain& g = *f.grid;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.inside(p)) continue;
    cplx z = g.center(p);
    out += std::to_string(g.col(p)) + "," + std::to_string(g.row(p)) + "," + fmt17(z.real()) + "," +
           fmt17(z.imag()) + "," + fmt17(f.values[p]) + "\n";
  }
  return out;
}

}  // namespace blab
