#pragma once

#include <string>
#include <vector>

namespace wander {

// One logged inequality. margin is the slack in log scale (nats),
// positive iff the check holds with room to spare.
struct CheckResult {
  std::string name;
  int n = 0;
  double margin = 0.0;
  bool pass = false;
};

struct VerificationReport {
  double gamma = 0.0;
  double delta = 0.0;
  std::vector<CheckResult> checks;
  bool overall = true;

  // pass iff margin > tol (tol absorbs the accumulated rounding budget).
  void add(const std::string& name, int n, double margin, double tol = 0.0) {
    bool pass = margin > tol;
    checks.push_back({name, n, margin, pass});
    overall = overall && pass;
  }
  void merge(const VerificationReport& other) {
    for (const auto& c : other.checks) checks.push_back(c);
    overall = overall && other.overall;
  }
  const CheckResult* find(const std::string& name, int n) const {
    for (const auto& c : checks)
      if (c.n == n && c.name == name) return &c;
    return nullptr;
  }
  double min_margin() const {
    double m = checks.empty() ? 0.0 : checks.front().margin;
    for (const auto& c : checks) m = c.margin < m ? c.margin : m;
    return m;
  }
};

// Serializes as {"schema":1,"gamma":...,"delta":...,"checks":[...],"overall":...}.
std::string to_json(const VerificationReport& report);

}  // namespace wander
