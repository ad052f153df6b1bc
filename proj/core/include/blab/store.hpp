#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "blab/bergman.hpp"
#include "blab/potential.hpp"

namespace blab {

inline constexpr std::uint8_t kFormatVersion = 1;

// stable 64-bit digest of the canonical JSON, as 16 hex characters
std::string cache_key(const json& params);

// "BLAB" | version | u64 length | payload | u64 digest of payload
std::string encode_blob(const std::string& payload, std::uint8_t version = kFormatVersion);
// payload iff magic, version, length and digest verify; throws CorruptEntry on a bad digest
std::optional<std::string> decode_blob(const std::string& blob);

class Store {
 public:
  explicit Store(std::filesystem::path root);
  // $BERGMAN_LAB_CACHE or the given fallback
  static Store from_env(const std::filesystem::path& fallback = ".blab");

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path cache_dir() const { return root_ / "cache"; }
  std::filesystem::path path_for(const std::string& key) const;

  void put(const std::string& key, const std::string& payload) const;
  // absent when missing, corrupt (warning on stderr) or from another format version
  std::optional<std::string> get(const std::string& key) const;

 private:
  std::filesystem::path root_;
};

std::string serialize_field(const ScalarField& f);
// the grid is rebuilt from the stored spec and spacing; fingerprint must match
ScalarField deserialize_field(const std::string& payload);

std::string serialize_basis(const OrthoBasis& b);
OrthoBasis deserialize_basis(const std::string& payload);

// CSV "i,j,x,y,value" over masked cells, 17 significant digits
std::string field_csv(const ScalarField& f);

}  // namespace blab
