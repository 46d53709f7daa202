#include "coarsekit/report.hpp"

#include <sstream>

namespace coarsekit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Uncertified: return "Uncertified";
  }
  return "Unknown";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Uncertified || b == Verdict::Uncertified) return Verdict::Uncertified;
  return Verdict::Pass;
}

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Violation: return "violation";
    case Severity::Warning: return "warning";
    case Severity::Uncertified: return "uncertified";
  }
  return "unknown";
}

void ValidationReport::add(Finding f) {
  const auto slot = static_cast<std::size_t>(f.severity);
  if (total_[slot]++ < kKeepPerSeverity) findings_.push_back(std::move(f));
}

void ValidationReport::violation(std::string rule, std::string message, std::vector<std::string> witness) {
  add({Severity::Violation, std::move(rule), std::move(message), std::move(witness)});
}

void ValidationReport::warning(std::string rule, std::string message, std::vector<std::string> witness) {
  add({Severity::Warning, std::move(rule), std::move(message), std::move(witness)});
}

void ValidationReport::uncertified(std::string rule, std::string message, std::vector<std::string> witness) {
  add({Severity::Uncertified, std::move(rule), std::move(message), std::move(witness)});
}

void ValidationReport::merge(const ValidationReport& other, std::string_view prefix) {
  std::array<std::size_t, 3> stored{0, 0, 0};
  for (const auto& f : other.findings_) {
    Finding copy = f;
    if (!prefix.empty()) copy.rule = std::string(prefix) + "." + copy.rule;
    ++stored[static_cast<std::size_t>(f.severity)];
    add(std::move(copy));
  }
  // Findings the other report only counted.
  for (std::size_t s = 0; s < 3; ++s) total_[s] += other.total_[s] - stored[s];
}

Verdict ValidationReport::verdict() const {
  if (count(Severity::Violation) > 0) return Verdict::Fail;
  if (count(Severity::Uncertified) > 0) return Verdict::Uncertified;
  return Verdict::Pass;
}

const Finding* ValidationReport::first(Severity s) const {
  for (const auto& f : findings_) {
    if (f.severity == s) return &f;
  }
  return nullptr;
}

bool ValidationReport::has_rule(std::string_view rule) const {
  for (const auto& f : findings_) {
    if (f.rule == rule) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << to_string(verdict()) << " (" << count(Severity::Violation) << " violations, "
      << count(Severity::Warning) << " warnings, " << count(Severity::Uncertified) << " uncertified)";
  return out.str();
}

}  // namespace coarsekit
