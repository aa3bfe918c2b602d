#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tyfix/checker.hpp"
#include "tyfix/diagnostics.hpp"
#include "tyfix/diff.hpp"
#include "tyfix/generators.hpp"

namespace tyfix {

enum class FixStatus { kFixed, kNoValidFix };
std::string to_string(FixStatus s);

struct FixOutcome {
  FixStatus status = FixStatus::kNoValidFix;
  std::optional<FixCandidate> chosen;
  int candidates_tried = 0;
  std::optional<std::string> patched_content;
  std::optional<CheckReport> post_report;
  std::chrono::duration<double> elapsed{0};
  int checker_calls = 0;
  /// The accepted edit as a hunk of the original file.
  std::optional<Hunk> applied;
  /// Why candidates or the generator failed, one line each.
  std::vector<std::string> notes;
};

nlohmann::json to_json(const FixOutcome& o);
FixOutcome outcome_from_json(const nlohmann::json& j);

/// 1-based line span [start, start + len) of the buggy hunk.
struct LineSpan {
  int start = 1;
  int len = 1;
  bool operator==(const LineSpan&) const = default;
};

/// The diagnostic's line widened to its statement (open brackets, backslash
/// continuations, triple-quoted strings), capped at `max_lines` by keeping a
/// window centred on the line.
LineSpan scope_statement(std::string_view content, int line, int max_lines = 3);

/// Query for repairing `err` at `span`, with `context_lines` lines of
/// surroundings on each side.
RepairQuery build_query(std::string_view content, const Diagnostic& err, const LineSpan& span,
                        int context_lines = 10);

/// Replaces the lines of `span` by `replacement` (lines joined by "\n"),
/// using the file's line terminator and keeping the span's final terminator.
Hunk splice_hunk(std::string_view content, const LineSpan& span, std::string_view replacement);

struct RepairOptions {
  int k = 50;
  /// Validate candidates concurrently. The lowest-ranked success still wins.
  bool parallel = false;
  std::string indent_unit = "    ";
  int max_hunk_lines = 3;
  int context_lines = 10;
};

/// Core loop: ask the generator for up to k candidates for `query` and
/// accept the first (in rank order) that fixes `err` without new errors.
/// `baseline` is the checker report of `content`.
FixOutcome repair_span(std::string_view content, const std::string& file_path, const Diagnostic& err,
                       const CheckReport& baseline, const LineSpan& span, const RepairQuery& query,
                       const CandidateGenerator& generator, CheckCache& cache, const RepairOptions& options = {});

/// Checks `content`, scopes the hunk around `err` and runs repair_span.
/// Throws InvalidArgument if the checker does not report `err`.
FixOutcome repair(std::string_view content, const std::string& file_path, const Diagnostic& err,
                  const CheckerHandle& checker, const CandidateGenerator& generator,
                  const RepairOptions& options = {});

}  // namespace tyfix
