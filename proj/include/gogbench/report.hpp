#pragma once

#include <string>
#include <vector>

namespace gogbench {

/// Accumulated validation findings. Empty means ok.
struct Report {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  void add(std::string issue) { issues.push_back(std::move(issue)); }
  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& i : other.issues) issues.push_back(prefix + i);
  }
  std::string str() const {
    std::string out;
    for (const auto& i : issues) {
      if (!out.empty()) out += '\n';
      out += i;
    }
    return out;
  }
  bool mentions(const std::string& needle) const {
    for (const auto& i : issues)
      if (i.find(needle) != std::string::npos) return true;
    return false;
  }
};

}  // namespace gogbench
