#include "evolab/report.hpp"

#include <algorithm>

namespace evolab {

void CheckReport::record(double margin, const Vec& p, const Vec& x, double value,
                         std::size_t max_witnesses) {
  worst_margin = std::max(worst_margin, margin);
  if (margin <= 0.0) return;
  ++violation_count;
  Witness w{p, x, value};
  if (violations.size() < max_witnesses) {
    violations.push_back(std::move(w));
  } else {
    auto weakest = std::min_element(
        violations.begin(), violations.end(),
        [](const Witness& a, const Witness& b) { return a.value < b.value; });
    if (value > weakest->value) *weakest = std::move(w);
  }
}

void CheckReport::finalize() {
  if (verdict == Verdict::inconclusive) return;
  verdict = violation_count > 0 ? Verdict::fail : Verdict::pass;
}

std::string to_string(CheckReport::Verdict v) {
  switch (v) {
    case CheckReport::Verdict::pass: return "pass";
    case CheckReport::Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& w : violations) {
    witnesses.push_back({{"p", std::vector<double>(w.p.data(), w.p.data() + w.p.size())},
                         {"x", std::vector<double>(w.x.data(), w.x.data() + w.x.size())},
                         {"value", w.value}});
  }
  nlohmann::json j{{"check", check_name},
                   {"samples", samples},
                   {"skipped", skipped},
                   {"verdict", to_string(verdict)},
                   {"threshold", threshold},
                   {"worst_margin", worst_margin},
                   {"violation_count", violation_count},
                   {"witnesses", witnesses}};
  if (strict_zero_hits > 0 || strict_violations > 0) {
    j["strict_zero_hits"] = strict_zero_hits;
    j["strict_violations"] = strict_violations;
  }
  return j;
}

}  // namespace evolab
