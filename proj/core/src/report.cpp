#include "qfsc/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "json.hpp"

namespace qfsc {

bool Report::allPass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

int Report::failures() const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) { return !c.pass; }));
}

std::string Report::toJson(bool include_timestamp) const {
  nlohmann::ordered_json root;
  root["suite"] = suite;
  root["seed"] = seed;
  if (include_timestamp) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    root["timestamp"] = buf;
  }
  std::vector<CheckRecord> sorted = checks;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckRecord& c : sorted) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["anchor"] = c.anchor;
    item["status"] = c.pass ? "pass" : "fail";
    item["max_deviation"] = c.max_deviation;
    item["tolerance"] = c.tolerance;
    item["params"] = c.params;
    arr.push_back(std::move(item));
  }
  root["checks"] = std::move(arr);
  root["summary"] = {{"total", checks.size()},
                     {"passed", checks.size() - failures()},
                     {"failed", failures()}};
  return root.dump(2) + "\n";
}

}  // namespace qfsc
