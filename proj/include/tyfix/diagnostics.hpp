#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tyfix/diff.hpp"

namespace tyfix {

/// Type-error category. Ten named classes plus an open-ended Other(name) for
/// anything the checker reports that is not one of them.
class ErrorClass {
 public:
  enum class Kind {
    kIncompatibleVariableType,
    kIncompatibleParameterType,
    kIncompatibleReturnType,
    kInvalidType,
    kUnboundName,
    kIncompatibleAttributeType,
    kUnsupportedOperand,
    kStrengthenedPrecondition,
    kWeakenedPostcondition,
    kCallError,
    kOther,
  };

  ErrorClass() : kind_(Kind::kOther) {}
  ErrorClass(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

  static ErrorClass other(std::string name);
  /// Maps a checker class name ("Incompatible return type") to a class.
  /// Matching is case-insensitive; unknown names become Other(name).
  static ErrorClass parse(std::string_view name);

  Kind kind() const { return kind_; }
  bool is_other() const { return kind_ == Kind::kOther; }
  std::string name() const;

  bool operator==(const ErrorClass& o) const { return kind_ == o.kind_ && other_ == o.other_; }
  std::strong_ordering operator<=>(const ErrorClass& o) const;

 private:
  Kind kind_;
  std::string other_;
};

/// The ten named classes, in reporting order.
std::span<const ErrorClass::Kind> named_error_classes();

struct Diagnostic {
  std::string file_path;
  int line = 1;    // 1-based
  int column = 0;  // 0-based
  ErrorClass error_class;
  std::string message;
  int raw_code = 0;

  bool operator==(const Diagnostic&) const = default;
};

/// Ordering used to keep reports canonical: (line, column, class, message).
bool diagnostic_less(const Diagnostic& a, const Diagnostic& b);

/// Same (error_class, message, line, column); path and code are not part of
/// the identity.
bool same_identity(const Diagnostic& a, const Diagnostic& b);

struct CheckReport {
  std::vector<Diagnostic> diagnostics;
  bool parse_ok = true;

  static CheckReport unparsable() { return CheckReport{{}, false}; }
  /// Sorts and removes duplicates; clears diagnostics of unparsable reports.
  void canonicalize();

  bool operator==(const CheckReport&) const = default;
};

// Wire protocol: one JSON object per line on the adapter's stdout,
//   {"path": str, "line": int, "column": int, "code": int, "name": str,
//    "description": str}
// A line {"parse_ok": false} marks a file the checker could not parse.
nlohmann::json to_wire(const Diagnostic& d);
Diagnostic from_wire(const nlohmann::json& j);
std::string to_wire_line(const Diagnostic& d);

/// Parses adapter stdout. Throws ExternalCheckerFailure on malformed lines.
CheckReport parse_protocol(std::string_view output);
std::string render_protocol(const CheckReport& report);

nlohmann::json to_json(const CheckReport& report);

/// True iff the report still contains `d` after translating its line through
/// `remap`. A line inside an applied hunk is unmappable and yields false; the
/// caller decides what "still present" means there.
bool same_error(const Diagnostic& d, const CheckReport& report, const LineMap& remap);

}  // namespace tyfix
