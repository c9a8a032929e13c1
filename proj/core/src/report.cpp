#include "wander/report.hpp"

#include <nlohmann/json.hpp>

namespace wander {

std::string to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["gamma"] = report.gamma;
  j["delta"] = report.delta;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back(nlohmann::ordered_json{
        {"name", c.name}, {"n", c.n}, {"margin", c.margin}, {"pass", c.pass}});
  }
  j["overall"] = report.overall;
  return j.dump(2) + "\n";
}

}  // namespace wander
