#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "tyfix/diagnostics.hpp"

namespace tyfix {

/// A type checker. Implementations must be safe to call concurrently.
class Checker {
 public:
  virtual ~Checker() = default;
  /// Checks `content` as if it were the file at `file_path` (relative).
  virtual CheckReport check(std::string_view content, const std::string& file_path) const = 0;
};

using CheckerHandle = std::shared_ptr<const Checker>;

/// Content normalization used for fixture keys: LF endings and trailing
/// whitespace stripped from every line.
std::string normalize_for_fixture(std::string_view content);
std::string fixture_key(std::string_view content);

/// Content-addressed checker backed by a table of precomputed reports.
///
/// File format:
///   {"entries": {"<sha256>": {"diagnostics": [<wire diag>...], "parse_ok": true,
///                             "label": "optional note"}, ...},
///    "default": {"diagnostics": [...]}}          // optional
/// An entry may also be a bare array of diagnostics. Content without an entry
/// gets the default report, or FixtureMiss when there is none. Diagnostic
/// paths are rewritten to the path being checked.
class FixtureChecker final : public Checker {
 public:
  FixtureChecker() = default;

  static FixtureChecker from_json(const nlohmann::json& j);
  static FixtureChecker load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  void add(std::string_view content, CheckReport report, std::string label = {});
  void set_default(CheckReport report) { default_ = std::move(report); }
  std::size_t size() const { return table_.size(); }

  CheckReport check(std::string_view content, const std::string& file_path) const override;

 private:
  struct Entry {
    CheckReport report;
    std::string label;
  };
  std::map<std::string, Entry> table_;
  std::optional<CheckReport> default_;
};

/// Runs `<command> <file>` on a temporary copy of the content and parses the
/// wire protocol from stdout. Exit code 0 means the checker ran; anything
/// else (or a timeout, or malformed output) is an ExternalCheckerFailure.
class ExternalChecker final : public Checker {
 public:
  explicit ExternalChecker(std::string command,
                           std::chrono::milliseconds timeout = std::chrono::seconds(300));

  CheckReport check(std::string_view content, const std::string& file_path) const override;
  const std::string& command() const { return command_; }

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

/// Adapts a callable; used for synthetic checkers in tests and benchmarks.
class FunctionChecker final : public Checker {
 public:
  using Fn = std::function<CheckReport(std::string_view, const std::string&)>;
  explicit FunctionChecker(Fn fn) : fn_(std::move(fn)) {}
  CheckReport check(std::string_view content, const std::string& file_path) const override {
    return fn_(content, file_path);
  }

 private:
  Fn fn_;
};

/// Memoizes check results by content hash and counts real checker calls.
/// Thread-safe; concurrent misses on the same content may both run.
class CheckCache {
 public:
  explicit CheckCache(CheckerHandle checker) : checker_(std::move(checker)) {}

  CheckReport check(std::string_view content, const std::string& file_path);
  int calls() const { return calls_.load(); }
  const CheckerHandle& checker() const { return checker_; }

 private:
  CheckerHandle checker_;
  std::mutex mu_;
  std::unordered_map<std::string, CheckReport> memo_;
  std::atomic<int> calls_{0};
};

/// Builds a checker from a CLI spec: "fixture:<path>" loads a fixture table,
/// anything else is an external command line.
CheckerHandle make_checker(const std::string& spec);

/// Resolves --checker-cmd, falling back to the TYFIX_CHECKER_CMD variable.
std::optional<std::string> checker_spec_from_env(const std::optional<std::string>& flag);

}  // namespace tyfix
