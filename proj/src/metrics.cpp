#include "tyfix/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "tyfix/error.hpp"
#include "tyfix/indent.hpp"
#include "tyfix/subprocess.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

bool exact_match(std::string_view candidate, std::string_view developer_fix) {
  return text::normalize_eol(candidate) == text::normalize_eol(developer_fix);
}

bool exact_match_ignoring_whitespace(std::string_view candidate, std::string_view developer_fix) {
  auto squeeze = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
  };
  return squeeze(candidate) == squeeze(developer_fix);
}

namespace {

nlohmann::json opt_int(const std::optional<int>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::optional<int> get_opt_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<int>();
}

}  // namespace

nlohmann::json to_json(const EvalRecord& r) {
  return {{"entry", to_json(r.entry)},
          {"outcome", to_json(r.outcome)},
          {"error_removed_rank", opt_int(r.error_removed_rank)},
          {"exact_match_rank", opt_int(r.exact_match_rank)},
          {"loose_match_rank", opt_int(r.loose_match_rank)},
          {"stale", r.stale},
          {"stale_reason", r.stale_reason}};
}

EvalRecord record_from_json(const nlohmann::json& j) {
  EvalRecord r;
  r.entry = entry_from_json(j.at("entry"));
  r.outcome = outcome_from_json(j.at("outcome"));
  r.error_removed_rank = get_opt_int(j, "error_removed_rank");
  r.exact_match_rank = get_opt_int(j, "exact_match_rank");
  r.loose_match_rank = get_opt_int(j, "loose_match_rank");
  r.stale = j.value("stale", false);
  r.stale_reason = j.value("stale_reason", "");
  return r;
}

void write_records(const std::filesystem::path& path, std::span<const EvalRecord> records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  write_file(path, out);
}

std::vector<EvalRecord> read_records(const std::filesystem::path& path) {
  std::vector<EvalRecord> out;
  for (const auto& line : text::split_plain(read_file(path))) {
    if (text::is_blank(line)) continue;
    out.push_back(record_from_json(nlohmann::json::parse(line)));
  }
  return out;
}

namespace {

struct Counts {
  int entries = 0;
  int stale = 0;
  std::vector<int> removal, exact, loose;
  double seconds = 0;
};

void add(Counts& c, const EvalRecord& r, const std::vector<int>& k_list) {
  if (c.removal.empty()) c.removal.assign(k_list.size(), 0), c.exact = c.removal, c.loose = c.removal;
  if (r.stale) {
    ++c.stale;
    return;
  }
  ++c.entries;
  c.seconds += r.outcome.elapsed.count();
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (r.error_removed_rank && *r.error_removed_rank <= k_list[i]) ++c.removal[i];
    if (r.exact_match_rank && *r.exact_match_rank <= k_list[i]) ++c.exact[i];
    if (r.loose_match_rank && *r.loose_match_rank <= k_list[i]) ++c.loose[i];
  }
}

double percent(int part, int whole) { return whole == 0 ? 0.0 : 100.0 * part / whole; }

MetricsRow to_row(std::string label, const Counts& c, std::size_t nk) {
  MetricsRow row;
  row.label = std::move(label);
  row.entries = c.entries;
  row.stale = c.stale;
  for (std::size_t i = 0; i < nk; ++i) {
    row.removal.push_back(percent(c.removal.empty() ? 0 : c.removal[i], c.entries));
    row.exact.push_back(percent(c.exact.empty() ? 0 : c.exact[i], c.entries));
    row.loose.push_back(percent(c.loose.empty() ? 0 : c.loose[i], c.entries));
  }
  return row;
}

}  // namespace

MetricsTable compute_table(std::span<const EvalRecord> records, const std::vector<int>& k_list) {
  if (k_list.empty()) throw InvalidArgument("k_list must not be empty");
  MetricsTable t;
  t.k_list = k_list;
  std::map<ErrorClass, Counts> per_class;
  Counts total;
  for (const auto& r : records) {
    add(per_class[r.entry.error_class], r, k_list);
    add(total, r, k_list);
  }
  // ErrorClass ordering puts the named classes first, in reporting order.
  for (const auto& [cls, counts] : per_class) t.rows.push_back(to_row(cls.name(), counts, k_list.size()));
  t.rows.push_back(to_row("Total", total, k_list.size()));
  t.mean_seconds = total.entries == 0 ? 0.0 : total.seconds / total.entries;
  return t;
}

nlohmann::json to_json(const MetricsTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"class", r.label},
                    {"entries", r.entries},
                    {"stale", r.stale},
                    {"removal", r.removal},
                    {"exact", r.exact},
                    {"exact_ignoring_whitespace", r.loose}});
  }
  return {{"k", t.k_list}, {"rows", rows}, {"mean_seconds", t.mean_seconds}};
}

MetricsTable table_from_json(const nlohmann::json& j) {
  MetricsTable t;
  t.k_list = j.at("k").get<std::vector<int>>();
  t.mean_seconds = j.value("mean_seconds", 0.0);
  for (const auto& r : j.at("rows")) {
    MetricsRow row;
    row.label = r.at("class").get<std::string>();
    row.entries = r.at("entries").get<int>();
    row.stale = r.value("stale", 0);
    row.removal = r.at("removal").get<std::vector<double>>();
    row.exact = r.at("exact").get<std::vector<double>>();
    row.loose = r.value("exact_ignoring_whitespace", std::vector<double>{});
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string render_table(const MetricsTable& t) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Error class", "Entries"};
  for (int k : t.k_list) header.push_back("Removal@" + std::to_string(k));
  for (int k : t.k_list) header.push_back("Exact@" + std::to_string(k));
  cells.push_back(header);
  auto fmt = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << v;
    return s.str();
  };
  for (const auto& r : t.rows) {
    const bool total = &r == &t.rows.back();
    std::vector<std::string> row{total ? "**" + r.label + "**" : r.label, std::to_string(r.entries)};
    for (double v : r.removal) row.push_back(fmt(v));
    for (double v : r.exact) row.push_back(fmt(v));
    cells.push_back(std::move(row));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], text::utf8_length(row[i]));
  }
  std::string out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t i = 0; i < cells[r].size(); ++i) {
      const auto& cell = cells[r][i];
      const std::string pad(width[i] - text::utf8_length(cell), ' ');
      if (i) out += "  ";
      out += i == 0 ? cell + pad : pad + cell;  // numbers right-aligned
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    }
  }
  return out;
}

namespace {

class FixedCandidates : public CandidateGenerator {
 public:
  explicit FixedCandidates(std::vector<FixCandidate> c) : c_(std::move(c)) {}
  std::vector<FixCandidate> generate(const RepairQuery&, int k) const override {
    auto out = c_;
    if (static_cast<int>(out.size()) > k) out.resize(k);
    return out;
  }
  std::string name() const override { return "fixed"; }

 private:
  std::vector<FixCandidate> c_;
};

EvalRecord stale_record(const DatasetEntry& entry, std::string reason) {
  EvalRecord r;
  r.entry = entry;
  r.stale = true;
  r.stale_reason = std::move(reason);
  return r;
}

}  // namespace

EvalRecord evaluate_entry(const DatasetEntry& entry, const CheckerHandle& checker,
                          const CandidateGenerator& generator, const EvalOptions& options) {
  if (options.k_list.empty()) throw InvalidArgument("k_list must not be empty");
  const int k = *std::max_element(options.k_list.begin(), options.k_list.end());
  if (entry.old_content.empty()) return stale_record(entry, "entry carries no old_content");

  const auto err = entry_diagnostic(entry);
  const auto lines = text::split_plain(entry.old_content);
  const LineSpan span{entry.hunk_start, static_cast<int>(text::split_plain(entry.buggy_hunk).size())};
  if (span.len < 1 || span.start < 1 || span.start + span.len - 1 > static_cast<int>(lines.size()) ||
      text::join(std::vector<std::string>(lines.begin() + span.start - 1, lines.begin() + span.start - 1 + span.len)) !=
          text::normalize_eol(entry.buggy_hunk)) {
    return stale_record(entry, "buggy_hunk does not match old_content at hunk_start");
  }

  CheckCache cache(checker);
  CheckReport baseline;
  try {
    baseline = cache.check(entry.old_content, entry.file_path);
  } catch (const Error& e) {
    return stale_record(entry, std::string("checker failed on old_content: ") + e.what());
  }
  const bool present = std::any_of(baseline.diagnostics.begin(), baseline.diagnostics.end(),
                                   [&](const Diagnostic& d) { return same_identity(d, err); });
  if (!present) return stale_record(entry, "the diagnostic no longer reproduces");

  auto query = build_query(entry.old_content, err, span, options.repair.context_lines);
  query.error_line_text = entry.error_line_text;
  query.buggy_hunk = entry.buggy_hunk;

  EvalRecord rec;
  rec.entry = entry;
  std::vector<FixCandidate> candidates;
  try {
    candidates = generator.generate(query, k);
  } catch (const Error& e) {
    rec.outcome.notes.push_back(std::string("generator: ") + e.what());
    return rec;
  }
  if (static_cast<int>(candidates.size()) > k) candidates.resize(k);

  RepairOptions ro = options.repair;
  ro.k = k;
  rec.outcome = repair_span(entry.old_content, entry.file_path, err, baseline, span, query,
                            FixedCandidates(candidates), cache, ro);
  rec.outcome.checker_calls = cache.calls();
  if (rec.outcome.status == FixStatus::kFixed) rec.error_removed_rank = rec.outcome.chosen->rank;

  // Exact matches are counted from the accepted candidate's rank onward.
  const auto marked = tokenize_indent(query.buggy_hunk);
  for (const auto& c : candidates) {
    if (!rec.error_removed_rank || *rec.error_removed_rank > c.rank) continue;
    std::string text = c.replacement_hunk;
    if (c.source.kind == CandidateSource::Kind::kExternal) {
      try {
        text = detokenize_indent(IndentedText{text, marked.pushes, false}, ro.indent_unit);
      } catch (const Error&) {
        continue;
      }
    }
    if (!rec.exact_match_rank && exact_match(text, entry.fixed_hunk)) rec.exact_match_rank = c.rank;
    if (!rec.loose_match_rank && exact_match_ignoring_whitespace(text, entry.fixed_hunk)) rec.loose_match_rank = c.rank;
  }
  return rec;
}

EvalResult evaluate_serial(std::span<const DatasetEntry> entries, const CheckerHandle& checker,
                           const CandidateGenerator& generator, const EvalOptions& options) {
  EvalResult res;
  for (const auto& e : entries) res.records.push_back(evaluate_entry(e, checker, generator, options));
  res.table = compute_table(res.records, options.k_list);
  return res;
}

EvalResult evaluate(std::span<const DatasetEntry> entries, const CheckerHandle& checker,
                    const CandidateGenerator& generator, const EvalOptions& options) {
  if (!options.parallel) return evaluate_serial(entries, checker, generator, options);
  EvalResult res;
  res.records.resize(entries.size());
  std::vector<std::string> failures(entries.size());
  const auto n = static_cast<long>(entries.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      res.records[i] = evaluate_entry(entries[i], checker, generator, options);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error("evaluation failed: " + f);
  }
  res.table = compute_table(res.records, options.k_list);
  return res;
}

}  // namespace tyfix
