#ifndef QFSC_REPORT_HPP
#define QFSC_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qfsc {

/// One verified identity. `anchor` states the identity itself, as a short
/// formula, so the report is self-describing.
struct CheckRecord {
  std::string name;
  std::string anchor;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string params;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;

  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  bool allPass() const;
  int failures() const;

  /// Deterministic JSON: checks sorted by name, fixed key order. The
  /// timestamp field is optional so reports can be compared byte for byte.
  std::string toJson(bool include_timestamp = true) const;
};

}  // namespace qfsc

#endif
