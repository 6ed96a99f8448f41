#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace selstab {

// Coarse classes the CLI maps onto exit codes: Usage -> 2 (bad input or
// configured limits), Data -> 3 (inputs fine but information is missing),
// Hypothesis -> 4 (a mathematical precondition fails).
enum class ErrorCategory { Usage, Data, Hypothesis };

// Every failure the library reports deliberately derives from ToolError so
// callers can branch on category without string matching.
struct ToolError : std::runtime_error {
  explicit ToolError(const std::string& what, ErrorCategory cat = ErrorCategory::Usage)
      : std::runtime_error(what), category(cat) {}
  ErrorCategory category;
};

// Caller passed a value outside a documented precondition.
struct InvalidParameter : ToolError {
  explicit InvalidParameter(const std::string& what) : ToolError(what) {}
};

// Work refused because it would exceed a configured bound, not because the
// input is malformed.
struct ResourceLimit : ToolError {
  explicit ResourceLimit(const std::string& what) : ToolError(what) {}
};

// Text input (tables, config files) that does not parse; line is 1-based.
struct ParseError : ToolError {
  ParseError(const std::string& what, std::size_t line_no)
      : ToolError(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
  std::size_t line;
};

// Curve has bad reduction at the requested prime; counting is undefined there.
struct BadReduction : ToolError {
  explicit BadReduction(std::uint64_t ell_)
      : ToolError("bad reduction at " + std::to_string(ell_)), ell(ell_) {}
  std::uint64_t ell;
};

// A trace value was required but no source can provide it.
struct MissingTrace : ToolError {
  explicit MissingTrace(std::uint64_t ell_)
      : ToolError("no trace available at " + std::to_string(ell_), ErrorCategory::Data),
        ell(ell_) {}
  std::uint64_t ell;
};

// Enumeration would produce more members than the caller allowed.
struct CapExceeded : ToolError {
  CapExceeded(std::uint64_t count_, std::uint64_t cap_)
      : ToolError("enumeration has " + std::to_string(count_) + " members, cap " +
                  std::to_string(cap_)),
        count(count_), cap(cap_) {}
  std::uint64_t count;
  std::uint64_t cap;
};

// A structural hypothesis fails, so downstream counts would be meaningless;
// ell carries the offending prime when one exists (0 otherwise).
struct HypothesisViolated : ToolError {
  HypothesisViolated(const std::string& what, std::uint64_t ell_)
      : ToolError(what, ErrorCategory::Hypothesis), ell(ell_) {}
  std::uint64_t ell;
};

// sigma * tau * sigma^-1 != tau^ell at the working precision.
struct RelationViolated : ToolError {
  explicit RelationViolated(const std::string& what)
      : ToolError(what, ErrorCategory::Hypothesis) {}
};

// An elementary divisor sits at the last representable exponent, so finite
// and divisible summands cannot be told apart; rerun with a deeper N.
struct PrecisionInsufficient : ToolError {
  explicit PrecisionInsufficient(const std::string& what)
      : ToolError(what, ErrorCategory::Data) {}
};

}  // namespace selstab
