#include "tyfix/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>

#include "tyfix/error.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

namespace {

struct ClassName {
  ErrorClass::Kind kind;
  std::string_view name;
};

constexpr std::array<ClassName, 10> kClassNames{{
    {ErrorClass::Kind::kIncompatibleVariableType, "Incompatible variable type"},
    {ErrorClass::Kind::kIncompatibleParameterType, "Incompatible parameter type"},
    {ErrorClass::Kind::kIncompatibleReturnType, "Incompatible return type"},
    {ErrorClass::Kind::kInvalidType, "Invalid type"},
    {ErrorClass::Kind::kUnboundName, "Unbound name"},
    {ErrorClass::Kind::kIncompatibleAttributeType, "Incompatible attribute type"},
    {ErrorClass::Kind::kUnsupportedOperand, "Unsupported operand"},
    {ErrorClass::Kind::kStrengthenedPrecondition, "Strengthened precondition"},
    {ErrorClass::Kind::kWeakenedPostcondition, "Weakened postcondition"},
    {ErrorClass::Kind::kCallError, "Call error"},
}};

constexpr std::array<ErrorClass::Kind, 10> kNamedKinds{
    ErrorClass::Kind::kIncompatibleVariableType, ErrorClass::Kind::kIncompatibleParameterType,
    ErrorClass::Kind::kIncompatibleReturnType,   ErrorClass::Kind::kInvalidType,
    ErrorClass::Kind::kUnboundName,              ErrorClass::Kind::kIncompatibleAttributeType,
    ErrorClass::Kind::kUnsupportedOperand,       ErrorClass::Kind::kStrengthenedPrecondition,
    ErrorClass::Kind::kWeakenedPostcondition,    ErrorClass::Kind::kCallError,
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

ErrorClass ErrorClass::other(std::string name) {
  ErrorClass c;
  c.other_ = std::move(name);
  return c;
}

ErrorClass ErrorClass::parse(std::string_view name) {
  auto trimmed = text::trim(name);
  for (const auto& entry : kClassNames)
    if (iequals(trimmed, entry.name)) return ErrorClass(entry.kind);
  return other(std::string(trimmed));
}

std::string ErrorClass::name() const {
  for (const auto& entry : kClassNames)
    if (entry.kind == kind_) return std::string(entry.name);
  return other_;
}

std::strong_ordering ErrorClass::operator<=>(const ErrorClass& o) const {
  if (auto c = kind_ <=> o.kind_; c != 0) return c;
  return other_ <=> o.other_;
}

std::span<const ErrorClass::Kind> named_error_classes() { return kNamedKinds; }

bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
  return std::tie(a.line, a.column, a.error_class, a.message, a.file_path, a.raw_code) <
         std::tie(b.line, b.column, b.error_class, b.message, b.file_path, b.raw_code);
}

bool same_identity(const Diagnostic& a, const Diagnostic& b) {
  return a.error_class == b.error_class && a.message == b.message && a.line == b.line &&
         a.column == b.column;
}

void CheckReport::canonicalize() {
  if (!parse_ok) {
    diagnostics.clear();
    return;
  }
  std::sort(diagnostics.begin(), diagnostics.end(), diagnostic_less);
  diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
}

nlohmann::json to_wire(const Diagnostic& d) {
  return nlohmann::json{{"path", d.file_path},       {"line", d.line},
                        {"column", d.column},        {"code", d.raw_code},
                        {"name", d.error_class.name()}, {"description", d.message}};
}

Diagnostic from_wire(const nlohmann::json& j) {
  if (!j.is_object()) throw ExternalCheckerFailure("protocol line is not a JSON object");
  auto field = [&j](const char* key) -> const nlohmann::json& {
    auto it = j.find(key);
    if (it == j.end()) throw ExternalCheckerFailure(std::string("protocol line lacks \"") + key + "\"");
    return *it;
  };
  const auto& path = field("path");
  const auto& line = field("line");
  const auto& column = field("column");
  const auto& name = field("name");
  const auto& description = field("description");
  if (!path.is_string() || !line.is_number_integer() || !column.is_number_integer() ||
      !name.is_string() || !description.is_string())
    throw ExternalCheckerFailure("protocol line has a field of the wrong type");
  Diagnostic d;
  d.file_path = path.get<std::string>();
  d.line = line.get<int>();
  d.column = column.get<int>();
  d.error_class = ErrorClass::parse(name.get<std::string>());
  d.message = description.get<std::string>();
  if (auto it = j.find("code"); it != j.end()) {
    if (!it->is_number_integer()) throw ExternalCheckerFailure("protocol \"code\" is not an integer");
    d.raw_code = it->get<int>();
  }
  if (d.line < 1 || d.column < 0)
    throw ExternalCheckerFailure("protocol line has an invalid location");
  return d;
}

std::string to_wire_line(const Diagnostic& d) { return to_wire(d).dump(); }

CheckReport parse_protocol(std::string_view output) {
  CheckReport report;
  for (const auto& raw : text::split_lines(output)) {
    auto line = text::trim(raw);
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ExternalCheckerFailure("malformed protocol line: " + std::string(line));
    }
    if (j.is_object() && j.contains("parse_ok") && !j.contains("line")) {
      if (!j["parse_ok"].is_boolean()) throw ExternalCheckerFailure("\"parse_ok\" is not a boolean");
      if (!j["parse_ok"].get<bool>()) report.parse_ok = false;
      continue;
    }
    report.diagnostics.push_back(from_wire(j));
  }
  report.canonicalize();
  return report;
}

std::string render_protocol(const CheckReport& report) {
  std::string out;
  if (!report.parse_ok) return "{\"parse_ok\":false}\n";
  for (const auto& d : report.diagnostics) out += to_wire_line(d) + "\n";
  return out;
}

nlohmann::json to_json(const CheckReport& report) {
  auto diags = nlohmann::json::array();
  for (const auto& d : report.diagnostics) diags.push_back(to_wire(d));
  return nlohmann::json{{"parse_ok", report.parse_ok}, {"diagnostics", diags}};
}

bool same_error(const Diagnostic& d, const CheckReport& report, const LineMap& remap) {
  const auto mapped = remap.remap(d.line);
  const int* line = std::get_if<int>(&mapped);
  if (!line) return false;
  return std::any_of(report.diagnostics.begin(), report.diagnostics.end(), [&](const Diagnostic& r) {
    return r.error_class == d.error_class && r.message == d.message && r.line == *line &&
           r.column == d.column;
  });
}

}  // namespace tyfix
