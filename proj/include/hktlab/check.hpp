#pragma once

// Outcome records for exact identity checks. A failed check carries the
// first counterexample it met.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace hktlab {

struct Check {
  std::string id;
  std::string statement;
  bool ok = true;
  std::string counterexample;
};

inline std::string index_tuple(std::initializer_list<std::size_t> idx) {
  std::string s = "(";
  bool first = true;
  for (auto i : idx) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + ")";
}

/// Records the first failure; later failures are ignored.
inline void fail_once(Check& c, const std::string& where) {
  if (!c.ok) return;
  c.ok = false;
  c.counterexample = where;
}

inline bool all_ok(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

inline const Check* find_check(const std::vector<Check>& checks, const std::string& id) {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

}  // namespace hktlab
