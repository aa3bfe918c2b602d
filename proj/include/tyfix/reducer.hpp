#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tyfix/checker.hpp"
#include "tyfix/diagnostics.hpp"
#include "tyfix/diff.hpp"

namespace tyfix {

enum class ReductionStatus { kReduced, kIrreducible, kNotAFix };

std::string to_string(ReductionStatus s);

struct ReductionResult {
  std::vector<Hunk> hunks;
  int checker_calls = 0;
  Diagnostic fixed_diagnostic;
  ReductionStatus status = ReductionStatus::kNotAFix;
  /// Hunk indices of every subset the search evaluated, in order.
  std::vector<std::vector<std::size_t>> tested;
};

nlohmann::json to_json(const ReductionResult& r);

struct ReduceOptions {
  /// Evaluate all groups of one split level concurrently (OpenMP). The first
  /// fixing group in index order still wins, so results match the serial
  /// search; only the number of checker calls may grow.
  bool parallel_groups = false;
};

/// Contiguous partition of `hunks` into `granularity` parts whose sizes
/// differ by at most one, larger parts first. Requires
/// 1 <= granularity <= hunks.size().
std::vector<std::vector<Hunk>> split(std::span<const Hunk> hunks, std::size_t granularity);

/// Does applying `subset` to `old` fix `err` without introducing anything?
///
/// True iff the patched file parses, `err` is gone, and every diagnostic of
/// the patched file already existed in `baseline`. Locations are compared
/// after remapping through the subset. When `err` sits inside an applied
/// hunk, that hunk's new lines must carry no diagnostics at all; other
/// baseline diagnostics inside applied hunks count as pre-existing when the
/// same class and message reappear within that hunk's new lines.
bool fix_predicate(std::string_view old, std::span<const Hunk> subset, const Diagnostic& err,
                   const CheckReport& baseline, CheckCache& cache, const std::string& file_path);

bool fix_predicate(std::string_view old, std::span<const Hunk> subset, const Diagnostic& err,
                   const CheckReport& baseline, const CheckerHandle& checker,
                   const std::string& file_path);

/// Same judgement on an already-patched file.
bool fixes_without_regression(const CheckReport& patched_report, const LineMap& map,
                              const Diagnostic& err, const CheckReport& baseline);

/// Shrinks the hunks of old->new to a subset that still fixes `err`, by
/// halving with increasing granularity. The full commit is verified first;
/// if it does not satisfy the fix predicate the status is kNotAFix.
ReductionResult reduce(std::string_view old, std::string_view neu, const Diagnostic& err,
                       CheckCache& cache, const std::string& file_path,
                       const ReduceOptions& options = {});

ReductionResult reduce(std::string_view old, std::string_view neu, const Diagnostic& err,
                       const CheckerHandle& checker, const std::string& file_path,
                       const ReduceOptions& options = {});

}  // namespace tyfix
