#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace coarsekit {

/// Three-valued outcome of a check on a finite window. Uncertified means a
/// quantifier could not be fully evaluated inside the window; it is never
/// folded into Pass.
enum class Verdict { Pass, Fail, Uncertified };

std::string_view to_string(Verdict v);

/// Fail dominates Uncertified, which dominates Pass.
Verdict combine(Verdict a, Verdict b);

enum class Severity { Violation, Warning, Uncertified };

std::string_view to_string(Severity s);

struct Finding {
  Severity severity = Severity::Violation;
  std::string rule;
  std::string message;
  std::vector<std::string> witness;
};

/// Collected findings of a verifier. Empty of violations iff the checked
/// property holds on every certified instance. At most kKeepPerSeverity
/// findings of each severity are stored; the rest are only counted.
class ValidationReport {
 public:
  static constexpr std::size_t kKeepPerSeverity = 200;

  void violation(std::string rule, std::string message, std::vector<std::string> witness = {});
  void warning(std::string rule, std::string message, std::vector<std::string> witness = {});
  void uncertified(std::string rule, std::string message, std::vector<std::string> witness = {});
  void add(Finding f);

  /// Appends every finding of `other`, prefixing rules with `prefix` when non-empty.
  void merge(const ValidationReport& other, std::string_view prefix = {});

  bool ok() const { return count(Severity::Violation) == 0; }
  bool empty() const { return total_ == std::array<std::size_t, 3>{0, 0, 0}; }
  Verdict verdict() const;

  std::size_t count(Severity s) const { return total_[static_cast<std::size_t>(s)]; }
  const std::vector<Finding>& findings() const { return findings_; }

  /// First stored finding with the given severity, or nullptr.
  const Finding* first(Severity s) const;
  bool has_rule(std::string_view rule) const;

  std::string summary() const;

 private:
  std::vector<Finding> findings_;
  std::array<std::size_t, 3> total_{0, 0, 0};
};

}  // namespace coarsekit
