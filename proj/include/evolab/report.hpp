#pragma once

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "evolab/core.hpp"

namespace evolab {

struct Witness {
  Vec p;
  Vec x;
  double value = 0.0;
};

// Outcome of a sampled check. Margins are violation excess: a sample's margin
// is positive exactly when it breaks the condition, so worst_margin <= 0 on a
// pass. Only exemplar witnesses are kept (the most violating ones); the full
// count is in violation_count.
struct CheckReport {
  enum class Verdict { pass, fail, inconclusive };

  std::string check_name;
  long samples = 0;
  long skipped = 0;
  double threshold = 0.0;
  double worst_margin = -std::numeric_limits<double>::infinity();
  long violation_count = 0;
  std::vector<Witness> violations;
  Verdict verdict = Verdict::pass;

  // strictness statistics (filled by the decrease-condition check)
  long strict_zero_hits = 0;
  long strict_violations = 0;

  void record(double margin, const Vec& p, const Vec& x, double value,
              std::size_t max_witnesses = 8);
  void finalize();

  nlohmann::json to_json() const;
};

std::string to_string(CheckReport::Verdict v);

}  // namespace evolab
