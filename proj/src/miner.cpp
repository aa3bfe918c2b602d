#include "tyfix/miner.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <random>
#include <regex>
#include <tuple>

#include "tyfix/error.hpp"
#include "tyfix/subprocess.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
    case Split::kUnassigned:
      break;
  }
  return "";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "valid") return Split::kValid;
  if (s == "test") return Split::kTest;
  return Split::kUnassigned;
}

std::string to_string(Rejection r) {
  switch (r) {
    case Rejection::kNone:
      return "none";
    case Rejection::kNotReduced:
      return "not_a_fix";
    case Rejection::kMultiHunk:
      return "multi_hunk";
    case Rejection::kNotLocal:
      return "not_local";
    case Rejection::kDeletionOnly:
      return "deletion_only";
    case Rejection::kTooLong:
      return "too_long";
    case Rejection::kTooManyLines:
      return "too_many_lines";
    case Rejection::kSuppression:
      return "suppression";
    case Rejection::kUnchanged:
      return "unchanged";
  }
  return "unknown";
}

nlohmann::json to_json(const DatasetEntry& e) {
  return nlohmann::json{
      {"error_class", e.error_class.name()},
      {"message", e.message},
      {"error_line_text", e.error_line_text},
      {"buggy_hunk", e.buggy_hunk},
      {"fixed_hunk", e.fixed_hunk},
      {"file_path", e.file_path},
      {"line", e.line},
      {"column", e.column},
      {"repo_id", e.repo_id},
      {"commit_id", e.commit_id},
      {"split", to_string(e.split)},
      {"raw_code", e.raw_code},
      {"hunk_start", e.hunk_start},
      {"old_content", e.old_content},
  };
}

DatasetEntry entry_from_json(const nlohmann::json& j) {
  DatasetEntry e;
  try {
    e.error_class = ErrorClass::parse(j.at("error_class").get<std::string>());
    e.message = j.at("message").get<std::string>();
    e.error_line_text = j.at("error_line_text").get<std::string>();
    e.buggy_hunk = j.at("buggy_hunk").get<std::string>();
    e.fixed_hunk = j.at("fixed_hunk").get<std::string>();
    e.file_path = j.at("file_path").get<std::string>();
    e.line = j.at("line").get<int>();
    e.column = j.at("column").get<int>();
    e.repo_id = j.at("repo_id").get<std::string>();
    e.commit_id = j.at("commit_id").get<std::string>();
    e.split = parse_split(j.value("split", std::string()));
    e.raw_code = j.value("raw_code", 0);
    e.hunk_start = j.value("hunk_start", e.line);
    e.old_content = j.value("old_content", std::string());
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("bad dataset entry: ") + ex.what());
  }
  return e;
}

std::string to_jsonl(std::span<const DatasetEntry> entries) {
  std::string out;
  for (const auto& e : entries) out += to_json(e).dump() + "\n";
  return out;
}

std::vector<DatasetEntry> read_jsonl(const std::filesystem::path& path) {
  std::vector<DatasetEntry> out;
  for (const auto& line : text::split_lines(read_file(path))) {
    auto body = text::trim(line);
    if (body.empty()) continue;
    try {
      out.push_back(entry_from_json(nlohmann::json::parse(body)));
    } catch (const nlohmann::json::parse_error& ex) {
      throw InvalidArgument(path.string() + ": " + ex.what());
    }
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, std::span<const DatasetEntry> entries) {
  write_file(path, to_jsonl(entries));
}

Diagnostic entry_diagnostic(const DatasetEntry& e) {
  Diagnostic d;
  d.file_path = e.file_path;
  d.line = e.line;
  d.column = e.column;
  d.error_class = e.error_class;
  d.message = e.message;
  d.raw_code = e.raw_code;
  return d;
}

bool has_suppression(std::string_view s) {
  static const std::regex kPattern(R"(#\s*(pyre-ignore|pyre-fixme|type\s*:\s*ignore))",
                                   std::regex::icase | std::regex::ECMAScript);
  return std::regex_search(s.begin(), s.end(), kPattern);
}

namespace {

std::vector<std::string> plain(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.emplace_back(text::strip_eol(l));
  return out;
}

auto entry_key(const DatasetEntry& e) {
  return std::tie(e.repo_id, e.commit_id, e.file_path, e.line, e.column, e.error_class, e.message);
}

void sort_entries(std::vector<DatasetEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const DatasetEntry& a, const DatasetEntry& b) {
    return entry_key(a) < entry_key(b);
  });
}

}  // namespace

std::optional<DatasetEntry> make_entry(const CommitPair& pair, const ReductionResult& reduction,
                                       const FilterConfig& filters, Rejection* why) {
  auto reject = [why](Rejection r) -> std::optional<DatasetEntry> {
    if (why) *why = r;
    return std::nullopt;
  };
  if (why) *why = Rejection::kNone;
  if (reduction.status == ReductionStatus::kNotAFix || reduction.hunks.empty())
    return reject(Rejection::kNotReduced);
  if (reduction.hunks.size() != 1) return reject(Rejection::kMultiHunk);

  const Hunk& h = reduction.hunks.front();
  const Diagnostic& err = reduction.fixed_diagnostic;
  const auto old_lines = text::split_plain(pair.old_content);
  if (err.line < 1 || err.line > static_cast<int>(old_lines.size()))
    return reject(Rejection::kNotLocal);
  const std::string& err_line = old_lines[err.line - 1];

  std::vector<std::string> buggy, fixed;
  int start = h.old_start;
  if (h.old_len > 0 && err.line >= h.old_start && err.line < h.old_end()) {
    buggy = plain(h.old_text);
    fixed = plain(h.new_text);
  } else if (h.old_len == 0 && (err.line == h.old_start - 1 || err.line == h.old_start)) {
    // Pure insertion right next to the error line: widen to include it.
    buggy = {err_line};
    fixed = plain(h.new_text);
    if (err.line == h.old_start - 1)
      fixed.insert(fixed.begin(), err_line);
    else
      fixed.push_back(err_line);
    start = err.line;
  } else {
    return reject(Rejection::kNotLocal);
  }

  if (h.new_len == 0) return reject(Rejection::kDeletionOnly);
  if (std::max(h.old_len, h.new_len) > filters.max_changed_lines)
    return reject(Rejection::kTooManyLines);
  const auto buggy_text = text::join(buggy);
  const auto fixed_text = text::join(fixed);
  if (text::trim(fixed_text).empty()) return reject(Rejection::kDeletionOnly);
  if (text::utf8_length(buggy_text) > filters.max_hunk_chars ||
      text::utf8_length(fixed_text) > filters.max_hunk_chars)
    return reject(Rejection::kTooLong);
  if (buggy_text == fixed_text) return reject(Rejection::kUnchanged);
  if (has_suppression(buggy_text) || has_suppression(fixed_text))
    return reject(Rejection::kSuppression);

  DatasetEntry e;
  e.error_class = err.error_class;
  e.message = err.message;
  e.error_line_text = std::string(text::rtrim(err_line));
  e.buggy_hunk = buggy_text;
  e.fixed_hunk = fixed_text;
  e.file_path = pair.file_path;
  e.line = err.line;
  e.column = err.column;
  e.repo_id = pair.repo_id;
  e.commit_id = pair.commit_id;
  e.raw_code = err.raw_code;
  e.hunk_start = start;
  e.old_content = pair.old_content;
  return e;
}

std::vector<Diagnostic> find_fixed_errors(const CommitPair& pair, CheckCache& cache) {
  const auto before = cache.check(pair.old_content, pair.file_path);
  const auto after = cache.check(pair.new_content, pair.file_path);
  if (!before.parse_ok || !after.parse_ok) return {};
  const auto hunks = diff(pair.old_content, pair.new_content);
  const LineMap map(hunks);

  std::vector<Diagnostic> fixed;
  for (const auto& d : before.diagnostics) {
    const auto mapped = map.remap(d.line);
    bool still_there;
    if (const auto* inside = std::get_if<InsideHunk>(&mapped)) {
      const auto region = map.new_region(inside->hunk_index);
      still_there = std::any_of(after.diagnostics.begin(), after.diagnostics.end(), [&](const auto& a) {
        return region.contains(a.line) && a.error_class == d.error_class && a.message == d.message;
      });
    } else {
      still_there = same_error(d, after, map);
    }
    if (!still_there) fixed.push_back(d);
  }
  return fixed;
}

std::vector<Diagnostic> find_fixed_errors(const CommitPair& pair, const CheckerHandle& checker) {
  CheckCache cache(checker);
  return find_fixed_errors(pair, cache);
}

namespace {

MineResult mine_one(const CommitPair& pair, const CheckerHandle& checker, const MineOptions& options) {
  MineResult out;
  auto fail = [&](std::string reason) {
    out.failures.push_back({pair.repo_id, pair.commit_id, pair.file_path, std::move(reason)});
  };
  if (pair.old_content == pair.new_content) return out;
  try {
    CheckCache cache(checker);
    const auto fixed = find_fixed_errors(pair, cache);
    for (const auto& err : fixed) {
      ++out.fixed_errors;
      try {
        const auto reduction = reduce(pair.old_content, pair.new_content, err, cache,
                                      pair.file_path, options.reduce);
        Rejection why;
        if (auto entry = make_entry(pair, reduction, options.filters, &why))
          out.entries.push_back(std::move(*entry));
        else
          ++out.rejections[to_string(why)];
      } catch (const Error& e) {
        fail("line " + std::to_string(err.line) + ": " + e.what());
      }
    }
  } catch (const Error& e) {
    fail(e.what());
  }
  return out;
}

void merge_into(MineResult& total, MineResult&& part) {
  std::move(part.entries.begin(), part.entries.end(), std::back_inserter(total.entries));
  std::move(part.failures.begin(), part.failures.end(), std::back_inserter(total.failures));
  for (const auto& [k, v] : part.rejections) total.rejections[k] += v;
  total.fixed_errors += part.fixed_errors;
}

}  // namespace

MineResult mine_serial(std::span<const CommitPair> pairs, const CheckerHandle& checker,
                       const MineOptions& options) {
  MineResult total;
  for (const auto& pair : pairs) merge_into(total, mine_one(pair, checker, options));
  sort_entries(total.entries);
  return total;
}

MineResult mine(std::span<const CommitPair> pairs, const CheckerHandle& checker,
                const MineOptions& options) {
  std::vector<MineResult> parts(pairs.size());
  const auto n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) parts[i] = mine_one(pairs[i], checker, options);

  MineResult total;
  for (auto& part : parts) merge_into(total, std::move(part));
  sort_entries(total.entries);
  return total;
}

SplitSizes split_sizes(std::size_t n) {
  SplitSizes s;
  s.test = (n + 9) / 10;
  const std::size_t rest = n - s.test;
  s.valid = (rest + 9) / 10;
  s.train = rest - s.valid;
  return s;
}

void assign_splits(std::vector<DatasetEntry>& entries, std::uint64_t seed) {
  std::map<ErrorClass, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < entries.size(); ++i) by_class[entries[i].error_class].push_back(i);

  std::mt19937_64 rng(seed);
  for (auto& [cls, idx] : by_class) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return entry_key(entries[a]) < entry_key(entries[b]);
    });
    // Fisher-Yates with the raw engine output so the order is identical on
    // every standard library.
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    const auto sizes = split_sizes(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      entries[idx[k]].split = k < sizes.test                 ? Split::kTest
                              : k < sizes.test + sizes.valid ? Split::kValid
                                                             : Split::kTrain;
    }
  }
}

std::vector<CommitPair> load_pair_directory(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw InvalidArgument("not a directory: " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());

  std::vector<CommitPair> pairs;
  for (const auto& dir : dirs) {
    const auto before = dir / "before";
    const auto after = dir / "after";
    if (!fs::is_directory(before) || !fs::is_directory(after)) continue;
    std::string repo_id = "local";
    std::string commit_id = dir.filename().string();
    if (fs::exists(dir / "meta.json")) {
      const auto meta = nlohmann::json::parse(read_file(dir / "meta.json"));
      repo_id = meta.value("repo_id", repo_id);
      commit_id = meta.value("commit_id", commit_id);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(before))
      if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), before));
    std::sort(files.begin(), files.end());
    for (const auto& rel : files) {
      if (!fs::is_regular_file(after / rel)) continue;
      CommitPair p{repo_id, commit_id, rel.generic_string(), read_file(before / rel),
                   read_file(after / rel)};
      if (p.old_content != p.new_content) pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

}  // namespace tyfix
