#include "tyfix/checker.hpp"

#include <cstdlib>

#include "tyfix/error.hpp"
#include "tyfix/subprocess.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

std::string normalize_for_fixture(std::string_view content) {
  std::string out;
  out.reserve(content.size());
  std::size_t begin = 0;
  while (true) {
    const auto nl = content.find('\n', begin);
    const auto line = content.substr(begin, nl == std::string_view::npos ? nl : nl - begin);
    out += text::rtrim(line);
    if (nl == std::string_view::npos) break;
    out += '\n';
    begin = nl + 1;
  }
  return out;
}

std::string fixture_key(std::string_view content) {
  return text::sha256_hex(normalize_for_fixture(content));
}

namespace {

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport r;
  const nlohmann::json* diags = &j;
  if (j.is_object()) {
    if (auto it = j.find("parse_ok"); it != j.end()) r.parse_ok = it->get<bool>();
    auto it = j.find("diagnostics");
    static const nlohmann::json kEmpty = nlohmann::json::array();
    diags = it == j.end() ? &kEmpty : &*it;
  }
  if (!diags->is_array()) throw InvalidArgument("fixture diagnostics must be an array");
  for (const auto& d : *diags) r.diagnostics.push_back(from_wire(d));
  r.canonicalize();
  return r;
}

nlohmann::json report_to_json(const CheckReport& r, const std::string& label) {
  auto j = to_json(r);
  if (!label.empty()) j["label"] = label;
  return j;
}

CheckReport with_path(CheckReport r, const std::string& file_path) {
  for (auto& d : r.diagnostics) d.file_path = file_path;
  return r;
}

}  // namespace

FixtureChecker FixtureChecker::from_json(const nlohmann::json& j) {
  FixtureChecker fc;
  if (!j.is_object()) throw InvalidArgument("fixture must be a JSON object");
  if (auto it = j.find("entries"); it != j.end()) {
    for (const auto& [key, value] : it->items()) {
      Entry e{report_from_json(value), {}};
      if (value.is_object() && value.contains("label")) e.label = value["label"].get<std::string>();
      fc.table_[key] = std::move(e);
    }
  }
  if (auto it = j.find("default"); it != j.end() && !it->is_null())
    fc.default_ = report_from_json(*it);
  return fc;
}

FixtureChecker FixtureChecker::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("fixture " + path.string() + ": " + e.what());
  }
}

nlohmann::json FixtureChecker::to_json() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [key, e] : table_) entries[key] = report_to_json(e.report, e.label);
  nlohmann::json j{{"entries", entries}};
  if (default_) j["default"] = report_to_json(*default_, {});
  return j;
}

void FixtureChecker::add(std::string_view content, CheckReport report, std::string label) {
  report.canonicalize();
  table_[fixture_key(content)] = Entry{std::move(report), std::move(label)};
}

CheckReport FixtureChecker::check(std::string_view content, const std::string& file_path) const {
  const auto key = fixture_key(content);
  if (auto it = table_.find(key); it != table_.end()) return with_path(it->second.report, file_path);
  if (default_) return with_path(*default_, file_path);
  throw FixtureMiss("fixture has no entry for content " + key + " (" + file_path + ")");
}

ExternalChecker::ExternalChecker(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

CheckReport ExternalChecker::check(std::string_view content, const std::string& file_path) const {
  TempDir dir("tyfix-check");
  std::filesystem::path rel = file_path.empty() ? std::filesystem::path("input.py")
                                                : std::filesystem::path(file_path).relative_path();
  const auto target = dir.path() / rel;
  write_file(target, content);

  const auto result = run_shell(command_, {target.string()}, {}, timeout_);
  if (result.timed_out) throw ExternalCheckerFailure("checker timed out: " + command_);
  if (!result.exited_ok())
    throw ExternalCheckerFailure("checker failed (exit " + std::to_string(result.exit_code) +
                                 ", signal " + std::to_string(result.term_signal) +
                                 "): " + result.err);
  auto report = parse_protocol(result.out);
  // Keep diagnostics for the checked file only; adapters may report the
  // temporary path in absolute or relative form.
  std::erase_if(report.diagnostics, [&](const Diagnostic& d) {
    const std::filesystem::path p(d.file_path);
    return !(p == target || p == rel || (p.is_relative() && target.string().ends_with(d.file_path)));
  });
  for (auto& d : report.diagnostics) d.file_path = file_path;
  report.canonicalize();
  return report;
}

CheckReport CheckCache::check(std::string_view content, const std::string& file_path) {
  const auto key = text::sha256_hex(content);
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  ++calls_;
  auto report = checker_->check(content, file_path);
  std::lock_guard lock(mu_);
  memo_.emplace(key, report);
  return report;
}

CheckerHandle make_checker(const std::string& spec) {
  if (spec.starts_with("fixture:"))
    return std::make_shared<FixtureChecker>(FixtureChecker::load(spec.substr(8)));
  return std::make_shared<ExternalChecker>(spec);
}

std::optional<std::string> checker_spec_from_env(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return flag;
  if (const char* env = std::getenv("TYFIX_CHECKER_CMD"); env && *env) return std::string(env);
  return std::nullopt;
}

}  // namespace tyfix
