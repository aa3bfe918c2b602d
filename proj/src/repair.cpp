#include "tyfix/repair.hpp"

#include <algorithm>
#include <atomic>
#include <climits>

#include "pylex.hpp"
#include "tyfix/error.hpp"
#include "tyfix/indent.hpp"
#include "tyfix/reducer.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

std::string to_string(FixStatus s) { return s == FixStatus::kFixed ? "Fixed" : "NoValidFix"; }

namespace {

nlohmann::json hunk_json(const Hunk& h) {
  return {{"old_start", h.old_start}, {"old_len", h.old_len}, {"new_start", h.new_start},
          {"new_len", h.new_len},     {"old_text", h.old_text}, {"new_text", h.new_text}};
}

Hunk hunk_from_json(const nlohmann::json& j) {
  Hunk h;
  h.old_start = j.at("old_start").get<int>();
  h.old_len = j.at("old_len").get<int>();
  h.new_start = j.at("new_start").get<int>();
  h.new_len = j.at("new_len").get<int>();
  h.old_text = j.at("old_text").get<std::vector<std::string>>();
  h.new_text = j.at("new_text").get<std::vector<std::string>>();
  return h;
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.parse_ok = j.value("parse_ok", true);
  for (const auto& d : j.at("diagnostics")) r.diagnostics.push_back(from_wire(d));
  return r;
}

FixCandidate candidate_from_json(const nlohmann::json& j) {
  FixCandidate c;
  c.replacement_hunk = j.at("replacement_hunk").get<std::string>();
  c.rank = j.at("rank").get<int>();
  const auto& s = j.at("source");
  c.source.kind = s.at("kind").get<std::string>() == "template" ? CandidateSource::Kind::kTemplate
                                                                 : CandidateSource::Kind::kExternal;
  c.source.tag = s.at("tag").get<std::string>();
  return c;
}

}  // namespace

nlohmann::json to_json(const FixOutcome& o) {
  nlohmann::json j{{"status", to_string(o.status)},
                   {"candidates_tried", o.candidates_tried},
                   {"checker_calls", o.checker_calls},
                   {"elapsed_seconds", o.elapsed.count()},
                   {"notes", o.notes}};
  j["chosen"] = o.chosen ? to_json(*o.chosen) : nlohmann::json(nullptr);
  j["patched_content"] = o.patched_content ? nlohmann::json(*o.patched_content) : nlohmann::json(nullptr);
  j["post_report"] = o.post_report ? to_json(*o.post_report) : nlohmann::json(nullptr);
  j["applied"] = o.applied ? hunk_json(*o.applied) : nlohmann::json(nullptr);
  return j;
}

FixOutcome outcome_from_json(const nlohmann::json& j) {
  FixOutcome o;
  o.status = j.at("status").get<std::string>() == "Fixed" ? FixStatus::kFixed : FixStatus::kNoValidFix;
  o.candidates_tried = j.at("candidates_tried").get<int>();
  o.checker_calls = j.value("checker_calls", 0);
  o.elapsed = std::chrono::duration<double>(j.value("elapsed_seconds", 0.0));
  o.notes = j.value("notes", std::vector<std::string>{});
  if (!j.at("chosen").is_null()) o.chosen = candidate_from_json(j["chosen"]);
  if (!j.at("patched_content").is_null()) o.patched_content = j["patched_content"].get<std::string>();
  if (!j.at("post_report").is_null()) o.post_report = report_from_json(j["post_report"]);
  if (j.contains("applied") && !j["applied"].is_null()) o.applied = hunk_from_json(j["applied"]);
  return o;
}

LineSpan scope_statement(std::string_view content, int line, int max_lines) {
  const auto lines = text::split_lines(content);
  const int n = static_cast<int>(lines.size());
  if (line < 1 || line > n) throw InvalidArgument("line " + std::to_string(line) + " is outside the file");
  if (max_lines < 1) throw InvalidArgument("max_lines must be at least 1");
  const auto shape = pylex::line_shape(lines);

  int first = line - 1;  // 0-based
  while (first > 0 && (shape.depth_at_start[first] > 0 || shape.in_string[first] || shape.continued[first - 1]))
    --first;
  int last = line - 1;
  while (last + 1 < n && (shape.depth_at_end[last] > 0 || shape.continued[last] || shape.in_string[last + 1]))
    ++last;

  if (last - first + 1 > max_lines) {
    // Window around the diagnostic line, shifted to stay inside the statement.
    int lo = line - 1 - (max_lines - 1) / 2;
    lo = std::clamp(lo, first, last - max_lines + 1);
    first = lo;
    last = lo + max_lines - 1;
  }
  return {first + 1, last - first + 1};
}

RepairQuery build_query(std::string_view content, const Diagnostic& err, const LineSpan& span, int context_lines) {
  const auto lines = text::split_plain(content);
  const int n = static_cast<int>(lines.size());
  RepairQuery q;
  q.error_class = err.error_class;
  q.message = err.message;
  if (err.line >= 1 && err.line <= n) q.error_line_text = lines[err.line - 1];
  std::vector<std::string> hunk, context;
  for (int i = span.start; i < span.start + span.len && i <= n; ++i) hunk.push_back(lines[i - 1]);
  for (int i = std::max(1, span.start - context_lines); i < span.start; ++i) context.push_back(lines[i - 1]);
  for (int i = span.start + span.len; i <= std::min(n, span.start + span.len - 1 + context_lines); ++i)
    context.push_back(lines[i - 1]);
  q.buggy_hunk = text::join(hunk);
  q.context = text::join(context);
  return q;
}

Hunk splice_hunk(std::string_view content, const LineSpan& span, std::string_view replacement) {
  const auto lines = text::split_lines(content);
  if (span.start < 1 || span.len < 1 || span.start + span.len - 1 > static_cast<int>(lines.size()))
    throw InvalidArgument("hunk span outside the file");
  const std::string eol = text::detect_eol(content);
  Hunk h;
  h.old_start = span.start;
  h.old_len = span.len;
  h.new_start = span.start;
  h.old_text.assign(lines.begin() + (span.start - 1), lines.begin() + (span.start - 1 + span.len));
  const std::string last_eol(text::eol_of(h.old_text.back()));

  if (!replacement.empty()) {
    std::string body = text::normalize_eol(replacement);
    if (body.ends_with('\n')) body.pop_back();
    std::size_t begin = 0;
    for (;;) {
      auto end = body.find('\n', begin);
      if (end == std::string::npos) {
        h.new_text.push_back(body.substr(begin) + last_eol);
        break;
      }
      h.new_text.push_back(body.substr(begin, end - begin) + eol);
      begin = end + 1;
    }
  }
  h.new_len = static_cast<int>(h.new_text.size());
  return h;
}

namespace {

struct Attempt {
  bool fixed = false;
  std::string patched;
  CheckReport report;
  Hunk hunk;
  std::string note;
};

Attempt try_candidate(std::string_view content, const std::string& file_path, const Diagnostic& err,
                      const CheckReport& baseline, const LineSpan& span, const FixCandidate& cand,
                      const IndentedText& marked_hunk, CheckCache& cache, const RepairOptions& options) {
  Attempt a;
  try {
    std::string replacement = cand.replacement_hunk;
    if (cand.source.kind == CandidateSource::Kind::kExternal) {
      IndentedText t{replacement, marked_hunk.pushes, false};
      replacement = detokenize_indent(t, options.indent_unit);
    }
    a.hunk = splice_hunk(content, span, replacement);
    std::vector<Hunk> applied{a.hunk};
    a.patched = patch(content, applied);
    a.report = cache.check(a.patched, file_path);
    a.fixed = fixes_without_regression(a.report, LineMap(applied), err, baseline);
  } catch (const std::exception& e) {
    a.note = "candidate " + std::to_string(cand.rank) + ": " + e.what();
  }
  return a;
}

}  // namespace

FixOutcome repair_span(std::string_view content, const std::string& file_path, const Diagnostic& err,
                       const CheckReport& baseline, const LineSpan& span, const RepairQuery& query,
                       const CandidateGenerator& generator, CheckCache& cache, const RepairOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int calls_before = cache.calls();
  FixOutcome out;
  auto finish = [&]() {
    out.elapsed = std::chrono::steady_clock::now() - t0;
    out.checker_calls = cache.calls() - calls_before;
    return out;
  };
  if (options.k < 1) throw InvalidArgument("k must be at least 1");

  std::vector<FixCandidate> candidates;
  try {
    candidates = generator.generate(query, options.k);
  } catch (const Error& e) {
    out.notes.push_back(std::string("generator: ") + e.what());
    return finish();
  }
  if (static_cast<int>(candidates.size()) > options.k) candidates.resize(options.k);
  const auto marked = tokenize_indent(query.buggy_hunk);
  const int n = static_cast<int>(candidates.size());

  int winner = -1;
  Attempt best;
  if (!options.parallel) {
    for (int i = 0; i < n; ++i) {
      auto a = try_candidate(content, file_path, err, baseline, span, candidates[i], marked, cache, options);
      out.candidates_tried = i + 1;
      if (!a.note.empty()) out.notes.push_back(a.note);
      if (a.fixed) {
        winner = i;
        best = std::move(a);
        break;
      }
    }
  } else {
    std::vector<Attempt> attempts(n);
    std::vector<char> ran(n, 0);
    std::atomic<int> first_success{INT_MAX};
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) {
      // A better-ranked success already exists; this check cannot matter.
      if (i > first_success.load()) continue;
      attempts[i] = try_candidate(content, file_path, err, baseline, span, candidates[i], marked, cache, options);
      ran[i] = 1;
      if (attempts[i].fixed) {
        int cur = first_success.load();
        while (i < cur && !first_success.compare_exchange_weak(cur, i)) {
        }
      }
    }
    const int fs = first_success.load();
    winner = fs == INT_MAX ? -1 : fs;
    out.candidates_tried = winner >= 0 ? winner + 1 : n;
    for (int i = 0; i < out.candidates_tried; ++i) {
      if (ran[i] && !attempts[i].note.empty()) out.notes.push_back(attempts[i].note);
    }
    if (winner >= 0) best = std::move(attempts[winner]);
  }

  if (winner >= 0) {
    out.status = FixStatus::kFixed;
    out.chosen = candidates[winner];
    out.patched_content = std::move(best.patched);
    out.post_report = std::move(best.report);
    out.applied = std::move(best.hunk);
  }
  return finish();
}

FixOutcome repair(std::string_view content, const std::string& file_path, const Diagnostic& err,
                  const CheckerHandle& checker, const CandidateGenerator& generator, const RepairOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckCache cache(checker);
  const auto baseline = cache.check(content, file_path);
  const bool present = std::any_of(baseline.diagnostics.begin(), baseline.diagnostics.end(),
                                   [&](const Diagnostic& d) { return same_identity(d, err); });
  if (!present) {
    throw InvalidArgument("the checker does not report " + err.error_class.name() + " at line " +
                          std::to_string(err.line) + ", column " + std::to_string(err.column));
  }
  const auto span = scope_statement(content, err.line, options.max_hunk_lines);
  const auto query = build_query(content, err, span, options.context_lines);
  auto out = repair_span(content, file_path, err, baseline, span, query, generator, cache, options);
  out.checker_calls = cache.calls();
  out.elapsed = std::chrono::steady_clock::now() - t0;
  return out;
}

}  // namespace tyfix
