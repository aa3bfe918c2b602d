#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tyfix/checker.hpp"
#include "tyfix/diagnostics.hpp"
#include "tyfix/reducer.hpp"

namespace tyfix {

struct CommitPair {
  std::string repo_id;
  std::string commit_id;
  std::string file_path;
  std::string old_content;
  std::string new_content;
};

enum class Split { kUnassigned, kTrain, kValid, kTest };

std::string to_string(Split s);
Split parse_split(std::string_view s);

/// One mined error/fix pair. Hunk texts are the affected lines joined by
/// "\n" without a final terminator.
struct DatasetEntry {
  ErrorClass error_class;
  std::string message;
  std::string error_line_text;
  std::string buggy_hunk;
  std::string fixed_hunk;
  std::string file_path;
  int line = 1;
  int column = 0;
  std::string repo_id;
  std::string commit_id;
  Split split = Split::kUnassigned;

  // Enough to re-check the entry later: checker code of the diagnostic, the
  // first old-file line covered by buggy_hunk, and the whole old file.
  int raw_code = 0;
  int hunk_start = 1;
  std::string old_content;

  bool operator==(const DatasetEntry&) const = default;
};

nlohmann::json to_json(const DatasetEntry& e);
DatasetEntry entry_from_json(const nlohmann::json& j);
std::vector<DatasetEntry> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, std::span<const DatasetEntry> entries);
std::string to_jsonl(std::span<const DatasetEntry> entries);

/// Diagnostic for an entry, as the checker would report it on old_content.
Diagnostic entry_diagnostic(const DatasetEntry& e);

/// Dataset filters applied after reduction.
struct FilterConfig {
  std::size_t max_hunk_chars = 512;  // applied to both buggy and fixed hunk
  int max_changed_lines = 3;         // max(old_len, new_len) of the hunk
};

/// `# pyre-ignore`, `# pyre-fixme` or `# type: ignore`, case-insensitive.
bool has_suppression(std::string_view text);

/// Why a reduction did not become an entry; empty when it did.
enum class Rejection {
  kNone,
  kNotReduced,
  kMultiHunk,
  kNotLocal,
  kDeletionOnly,
  kTooLong,
  kTooManyLines,
  kSuppression,
  kUnchanged,
};
std::string to_string(Rejection r);

/// Turns a reduction of `pair` into a dataset entry, or reports which filter
/// rejected it.
std::optional<DatasetEntry> make_entry(const CommitPair& pair, const ReductionResult& reduction,
                                       const FilterConfig& filters, Rejection* why = nullptr);

/// Diagnostics of the old file that the commit removes, remapped through the
/// full diff. A diagnostic inside a changed region counts as removed unless
/// the same class and message reappear among that region's new lines.
std::vector<Diagnostic> find_fixed_errors(const CommitPair& pair, CheckCache& cache);
std::vector<Diagnostic> find_fixed_errors(const CommitPair& pair, const CheckerHandle& checker);

struct MineFailure {
  std::string repo_id;
  std::string commit_id;
  std::string file_path;
  std::string reason;
};

struct MineResult {
  std::vector<DatasetEntry> entries;
  std::vector<MineFailure> failures;
  std::map<std::string, int> rejections;  // Rejection name -> count
  int fixed_errors = 0;                   // reductions attempted
};

struct MineOptions {
  FilterConfig filters;
  ReduceOptions reduce;
};

/// Reference implementation: pairs one after another.
MineResult mine_serial(std::span<const CommitPair> pairs, const CheckerHandle& checker,
                       const MineOptions& options = {});

/// Same result as mine_serial, with pairs spread over an OpenMP worker pool.
/// Entries are ordered by (repo_id, commit_id, file_path, line) either way.
MineResult mine(std::span<const CommitPair> pairs, const CheckerHandle& checker,
                const MineOptions& options = {});

struct SplitSizes {
  std::size_t test = 0;
  std::size_t valid = 0;
  std::size_t train = 0;
};

/// ceil(10%) of a class goes to test, ceil(10%) of the rest to validation.
SplitSizes split_sizes(std::size_t class_size);

/// Labels entries per error class with a seeded shuffle.
void assign_splits(std::vector<DatasetEntry>& entries, std::uint64_t seed);

/// Pair directory layout: <root>/<name>/before/<path> and
/// <root>/<name>/after/<path>, with an optional <root>/<name>/meta.json
/// holding {"repo_id": ..., "commit_id": ...} (defaults: "local", <name>).
std::vector<CommitPair> load_pair_directory(const std::filesystem::path& root);

/// Commit messages must contain every word of one keyword group.
std::vector<std::vector<std::string>> default_commit_keywords();

/// Walks a git repository's history with the system git binary and returns
/// before/after pairs of the files touched by keyword-matching commits.
std::vector<CommitPair> load_git_history(
    const std::filesystem::path& repo,
    const std::vector<std::vector<std::string>>& keywords = default_commit_keywords(),
    const std::vector<std::string>& extensions = {".py"});

}  // namespace tyfix
