#include "tyfix/reducer.hpp"

#include <algorithm>
#include <exception>
#include <optional>

#include "tyfix/error.hpp"

namespace tyfix {

std::string to_string(ReductionStatus s) {
  switch (s) {
    case ReductionStatus::kReduced:
      return "Reduced";
    case ReductionStatus::kIrreducible:
      return "Irreducible";
    case ReductionStatus::kNotAFix:
      return "NotAFix";
  }
  return "NotAFix";
}

nlohmann::json to_json(const ReductionResult& r) {
  auto hunks = nlohmann::json::array();
  for (const auto& h : r.hunks)
    hunks.push_back({{"index", h.index},
                     {"old_start", h.old_start},
                     {"old_len", h.old_len},
                     {"new_start", h.new_start},
                     {"new_len", h.new_len},
                     {"old_text", h.old_text},
                     {"new_text", h.new_text}});
  return nlohmann::json{{"status", to_string(r.status)},
                        {"checker_calls", r.checker_calls},
                        {"fixed_diagnostic", to_wire(r.fixed_diagnostic)},
                        {"hunks", hunks},
                        {"tested", r.tested}};
}

std::vector<std::vector<Hunk>> split(std::span<const Hunk> hunks, std::size_t granularity) {
  if (granularity < 1 || granularity > hunks.size())
    throw InvalidArgument("split: granularity " + std::to_string(granularity) +
                          " outside [1, " + std::to_string(hunks.size()) + "]");
  std::vector<std::vector<Hunk>> parts;
  parts.reserve(granularity);
  const std::size_t base = hunks.size() / granularity;
  const std::size_t larger = hunks.size() % granularity;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < granularity; ++i) {
    const std::size_t len = base + (i < larger ? 1 : 0);
    parts.emplace_back(hunks.begin() + pos, hunks.begin() + pos + len);
    pos += len;
  }
  return parts;
}

namespace {

bool any_on_lines(const CheckReport& report, const LineMap::Region& region) {
  return std::any_of(report.diagnostics.begin(), report.diagnostics.end(),
                     [&](const Diagnostic& d) { return region.contains(d.line); });
}

bool pre_existing(const Diagnostic& d, const CheckReport& baseline, const LineMap& map) {
  for (const auto& b : baseline.diagnostics) {
    if (b.error_class != d.error_class || b.message != d.message) continue;
    const auto mapped = map.remap(b.line);
    if (const int* line = std::get_if<int>(&mapped)) {
      if (*line == d.line && b.column == d.column) return true;
    } else if (map.new_region(std::get<InsideHunk>(mapped).hunk_index).contains(d.line)) {
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> indices_of(std::span<const Hunk> hunks) {
  std::vector<std::size_t> out;
  out.reserve(hunks.size());
  for (const auto& h : hunks) out.push_back(h.index);
  return out;
}

}  // namespace

bool fixes_without_regression(const CheckReport& patched, const LineMap& map,
                              const Diagnostic& err, const CheckReport& baseline) {
  if (!patched.parse_ok) return false;
  const auto mapped = map.remap(err.line);
  if (const auto* inside = std::get_if<InsideHunk>(&mapped)) {
    if (any_on_lines(patched, map.new_region(inside->hunk_index))) return false;
  } else if (same_error(err, patched, map)) {
    return false;
  }
  return std::all_of(patched.diagnostics.begin(), patched.diagnostics.end(),
                     [&](const Diagnostic& d) { return pre_existing(d, baseline, map); });
}

bool fix_predicate(std::string_view old, std::span<const Hunk> subset, const Diagnostic& err,
                   const CheckReport& baseline, CheckCache& cache, const std::string& file_path) {
  const auto patched = patch(old, subset);
  const auto report = cache.check(patched, file_path);
  return fixes_without_regression(report, LineMap(subset), err, baseline);
}

bool fix_predicate(std::string_view old, std::span<const Hunk> subset, const Diagnostic& err,
                   const CheckReport& baseline, const CheckerHandle& checker,
                   const std::string& file_path) {
  CheckCache cache(checker);
  return fix_predicate(old, subset, err, baseline, cache, file_path);
}

namespace {

class Search {
 public:
  Search(std::string_view old, const Diagnostic& err, const CheckReport& baseline,
         CheckCache& cache, const std::string& file_path, ReductionResult& result)
      : old_(old), err_(err), baseline_(baseline), cache_(cache), path_(file_path), result_(result) {}

  bool fixes(std::span<const Hunk> subset) {
    result_.tested.push_back(indices_of(subset));
    return fix_predicate(old_, subset, err_, baseline_, cache_, path_);
  }

  /// Index of the first group that fixes the error, evaluated in order and
  /// stopping at the first success.
  std::optional<std::size_t> first_fixing_serial(const std::vector<std::vector<Hunk>>& groups) {
    for (std::size_t i = 0; i < groups.size(); ++i)
      if (fixes(groups[i])) return i;
    return std::nullopt;
  }

  std::optional<std::size_t> first_fixing_parallel(const std::vector<std::vector<Hunk>>& groups) {
    const auto n = static_cast<long>(groups.size());
    std::vector<char> ok(groups.size(), 0);
    std::vector<std::exception_ptr> errors(groups.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      try {
        ok[i] = fix_predicate(old_, groups[i], err_, baseline_, cache_, path_) ? 1 : 0;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
      result_.tested.push_back(indices_of(groups[i]));
      if (errors[i]) std::rethrow_exception(errors[i]);
      if (ok[i]) return i;
    }
    return std::nullopt;
  }

 private:
  std::string_view old_;
  const Diagnostic& err_;
  const CheckReport& baseline_;
  CheckCache& cache_;
  const std::string& path_;
  ReductionResult& result_;
};

}  // namespace

ReductionResult reduce(std::string_view old, std::string_view neu, const Diagnostic& err,
                       CheckCache& cache, const std::string& file_path,
                       const ReduceOptions& options) {
  ReductionResult result;
  result.fixed_diagnostic = err;
  const int calls_before = cache.calls();
  auto finish = [&](std::vector<Hunk> hunks, ReductionStatus status) {
    result.hunks = std::move(hunks);
    result.status = status;
    result.checker_calls = std::max(1, cache.calls() - calls_before);
    return std::move(result);
  };

  const auto baseline = cache.check(old, file_path);
  const auto all = diff(old, neu);
  Search search(old, err, baseline, cache, file_path, result);

  if (all.empty() || !search.fixes(all)) return finish(all, ReductionStatus::kNotAFix);
  if (all.size() == 1) return finish(all, ReductionStatus::kReduced);

  std::vector<Hunk> current = all;
  std::size_t granularity = 2;
  while (true) {
    granularity = std::min(granularity, current.size());
    const auto groups = split(current, granularity);
    const auto hit = options.parallel_groups ? search.first_fixing_parallel(groups)
                                             : search.first_fixing_serial(groups);
    if (hit) {
      if (groups[*hit].size() == 1) return finish(groups[*hit], ReductionStatus::kReduced);
      current = groups[*hit];
      continue;
    }
    if (granularity * 2 <= current.size()) {
      granularity *= 2;
    } else if (granularity == current.size()) {
      const auto status =
          current.size() == 1 ? ReductionStatus::kReduced : ReductionStatus::kIrreducible;
      return finish(current, status);
    } else {
      granularity = current.size();
    }
  }
}

ReductionResult reduce(std::string_view old, std::string_view neu, const Diagnostic& err,
                       const CheckerHandle& checker, const std::string& file_path,
                       const ReduceOptions& options) {
  CheckCache cache(checker);
  return reduce(old, neu, err, cache, file_path, options);
}

}  // namespace tyfix
