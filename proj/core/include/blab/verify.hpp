#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "blab/fixtures.hpp"

namespace blab {

enum class Status { Pass, Fail, Inconclusive };
const char* status_name(Status s);

struct VerifyReport {
  std::string check_id;
  std::string statement;  // the inequality under test, as a formula
  json fixture = json::object();
  std::map<std::string, double> measured;
  json bound;
  json slack = json::object();
  json tolerances = json::object();
  Status status = Status::Inconclusive;
  std::string note;
  std::uint64_t seed = 0;
  json config = json::object();
  double runtime_s = -1;  // emitted only when timings are requested

  json to_json(bool timings = false) const;
};

const std::vector<std::string>& check_ids();
// throws FixtureUnavailable for unknown ids
VerifyReport verify(const std::string& check_id, FixtureSet& fx);
// ids in registry order, at most `jobs` checks in flight (0: hardware concurrency)
std::vector<VerifyReport> verify_many(const std::vector<std::string>& ids, FixtureSet& fx, int jobs);

}  // namespace blab
