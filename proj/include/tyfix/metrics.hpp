#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tyfix/checker.hpp"
#include "tyfix/generators.hpp"
#include "tyfix/miner.hpp"
#include "tyfix/repair.hpp"

namespace tyfix {

/// Equal after converting CRLF to LF; nothing else is normalized.
bool exact_match(std::string_view candidate, std::string_view developer_fix);

/// Equal after removing all whitespace. Reported next to exact_match.
bool exact_match_ignoring_whitespace(std::string_view candidate, std::string_view developer_fix);

struct EvalRecord {
  DatasetEntry entry;
  FixOutcome outcome;
  std::optional<int> error_removed_rank;
  std::optional<int> exact_match_rank;
  std::optional<int> loose_match_rank;  // whitespace-insensitive
  bool stale = false;                   // baseline error did not reproduce
  std::string stale_reason;
};

nlohmann::json to_json(const EvalRecord& r);
EvalRecord record_from_json(const nlohmann::json& j);
void write_records(const std::filesystem::path& path, std::span<const EvalRecord> records);
std::vector<EvalRecord> read_records(const std::filesystem::path& path);

struct MetricsRow {
  std::string label;  // error class name or "Total"
  int entries = 0;    // excluding stale entries
  int stale = 0;
  std::vector<double> removal;  // percent, one per k
  std::vector<double> exact;
  std::vector<double> loose;
  bool operator==(const MetricsRow&) const = default;
};

struct MetricsTable {
  std::vector<int> k_list;
  std::vector<MetricsRow> rows;  // named classes in reporting order, others, then Total
  double mean_seconds = 0;       // mean repair time over non-stale entries
  bool operator==(const MetricsTable&) const = default;
};

/// Pure aggregation over records.
MetricsTable compute_table(std::span<const EvalRecord> records, const std::vector<int>& k_list = {1, 5, 50});

nlohmann::json to_json(const MetricsTable& t);
MetricsTable table_from_json(const nlohmann::json& j);
/// Aligned plain-text table; the totals row is printed in bold markup.
std::string render_table(const MetricsTable& t);

struct EvalOptions {
  std::vector<int> k_list{1, 5, 50};
  bool parallel = true;  // spread entries over OpenMP threads
  RepairOptions repair;  // repair.k is overridden by max(k_list)
};

/// Re-checks and repairs one dataset entry, recording removal and exact-match
/// ranks over the first max(k_list) candidates.
EvalRecord evaluate_entry(const DatasetEntry& entry, const CheckerHandle& checker,
                          const CandidateGenerator& generator, const EvalOptions& options);

struct EvalResult {
  std::vector<EvalRecord> records;  // same order as the input
  MetricsTable table;
};

EvalResult evaluate_serial(std::span<const DatasetEntry> entries, const CheckerHandle& checker,
                           const CandidateGenerator& generator, const EvalOptions& options = {});
EvalResult evaluate(std::span<const DatasetEntry> entries, const CheckerHandle& checker,
                    const CandidateGenerator& generator, const EvalOptions& options = {});

}  // namespace tyfix
