#include <algorithm>
#include <set>
#include <tuple>

#include "pylex.hpp"
#include "tyfix/error.hpp"
#include "tyfix/generators.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

using K = ErrorClass::Kind;
using pylex::Annotation;

namespace {

bool same_type(std::string_view a, std::string_view b) { return pylex::squash(a) == pylex::squash(b); }

std::string replace_range(std::string_view s, std::size_t begin, std::size_t end, std::string_view with) {
  std::string out(s.substr(0, begin));
  out += with;
  out += s.substr(end);
  return out;
}

std::string_view slice(std::string_view s, std::size_t begin, std::size_t end) { return s.substr(begin, end - begin); }

std::string_view last_component(std::string_view name) {
  auto dot = name.rfind('.');
  return dot == std::string_view::npos ? name : name.substr(dot + 1);
}

// Splits a bracket-internal argument list at top-level commas.
std::vector<std::string> split_top(std::string_view inner) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    char c = inner[i];
    if (c == '[' || c == '(' || c == '{') ++depth;
    if (c == ']' || c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.emplace_back(text::trim(inner.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.emplace_back(text::trim(inner.substr(start)));
  return parts;
}

std::string join_types(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

// Union[None, A, B] -> Optional[Union[A, B]]; Union[A, None] -> Optional[A].
std::optional<std::string> optional_form(std::string_view type) {
  auto t = text::trim(type);
  for (std::string_view head : {"Union[", "typing.Union["}) {
    if (!t.starts_with(head) || !t.ends_with("]")) continue;
    auto parts = split_top(t.substr(head.size(), t.size() - head.size() - 1));
    std::vector<std::string> rest;
    bool had_none = false;
    for (auto& p : parts) {
      if (p == "None") had_none = true;
      else rest.push_back(p);
    }
    if (!had_none || rest.empty()) return std::nullopt;
    if (rest.size() == 1) return "Optional[" + rest[0] + "]";
    return "Optional[Union[" + join_types(rest) + "]]";
  }
  return std::nullopt;
}

// Variants of a type to write into an annotation, most idiomatic first.
std::vector<std::string> type_variants(std::string_view type) {
  std::vector<std::string> out;
  if (auto opt = optional_form(type)) out.push_back(*opt);
  out.emplace_back(text::trim(type));
  return out;
}

bool is_none(const std::optional<std::string>& t) { return t && pylex::squash(*t) == "None"; }

bool targets(const Annotation& a, const std::optional<std::string>& subject) {
  if (!subject || a.is_return()) return false;
  return a.target == *subject || last_component(a.target) == last_component(*subject);
}

std::vector<Annotation> annotations(const TemplateInput& in) {
  auto anns = pylex::find_annotations(in.query.buggy_hunk);
  std::stable_partition(anns.begin(), anns.end(), [&](const Annotation& a) { return targets(a, in.facts.subject); });
  return anns;
}

std::string_view type_of(const TemplateInput& in, const Annotation& a) {
  return slice(in.query.buggy_hunk, a.type_begin, a.type_end);
}

std::string retype(const TemplateInput& in, const Annotation& a, std::string_view type) {
  return replace_range(in.query.buggy_hunk, a.type_begin, a.type_end, type);
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !pylex::is_ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return pylex::is_ident_char(c); }) && !pylex::is_keyword(s);
}

// Calls in `code`, the one named in the message first.
std::vector<pylex::Call> calls_in(std::string_view code, const MessageFacts& facts) {
  auto calls = pylex::find_calls(code);
  if (facts.callee) {
    std::stable_partition(calls.begin(), calls.end(), [&](const pylex::Call& c) { return c.name == *facts.callee; });
  }
  return calls;
}

bool keyword_arg(std::string_view arg) {
  for (const auto& t : pylex::tokenize(arg)) {
    if (t.kind == pylex::TokKind::kOp && slice(arg, t.begin, t.end) == "=") return true;
  }
  return false;
}

// Positions of the offending argument(s): the ordinal from the message if
// known, otherwise every argument.
std::vector<std::size_t> argument_positions(const pylex::Call& call, const MessageFacts& facts) {
  std::vector<std::size_t> idx;
  if (facts.argument_index) {
    if (static_cast<std::size_t>(*facts.argument_index) < call.args.size()) idx.push_back(*facts.argument_index);
    return idx;
  }
  for (std::size_t i = 0; i < call.args.size(); ++i) idx.push_back(i);
  return idx;
}

// Byte range of the error line inside the hunk, or the whole hunk.
std::pair<std::size_t, std::size_t> error_line_range(const RepairQuery& q) {
  const auto wanted = text::trim(q.error_line_text);
  std::size_t begin = 0;
  while (begin <= q.buggy_hunk.size()) {
    auto end = q.buggy_hunk.find('\n', begin);
    if (end == std::string::npos) end = q.buggy_hunk.size();
    if (!wanted.empty() && text::trim(slice(q.buggy_hunk, begin, end)) == wanted) return {begin, end};
    begin = end + 1;
  }
  return {0, q.buggy_hunk.size()};
}

// --- rules ---------------------------------------------------------------

std::vector<std::string> wrap_optional(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !is_none(in.hint->actual_type) || !in.hint->expected_type) return out;
  const auto& expected = *in.hint->expected_type;
  if (text::trim(expected).starts_with("Optional[")) return out;
  for (const auto& a : annotations(in)) {
    auto type = type_of(in, a);
    if (same_type(type, expected) || targets(a, in.facts.subject))
      out.push_back(retype(in, a, "Optional[" + std::string(type) + "]"));
  }
  return out;
}

std::vector<std::string> modify_parameter_annotation(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !in.hint->expected_type || is_none(in.hint->expected_type)) return out;
  std::vector<std::string> names;
  const std::string code = in.query.buggy_hunk + "\n" + in.query.error_line_text;
  for (const auto& call : calls_in(code, in.facts)) {
    for (auto i : argument_positions(call, in.facts)) {
      auto arg = text::trim(slice(code, call.args[i].begin, call.args[i].end));
      if (is_identifier(arg) && std::find(names.begin(), names.end(), arg) == names.end()) names.emplace_back(arg);
    }
  }
  auto anns = pylex::find_annotations(in.query.buggy_hunk);
  if (in.hint->actual_type) {
    std::stable_partition(anns.begin(), anns.end(),
                          [&](const Annotation& a) { return same_type(type_of(in, a), *in.hint->actual_type); });
  }
  for (const auto& name : names) {
    for (const auto& a : anns) {
      if (a.is_return() || a.target != name || same_type(type_of(in, a), *in.hint->expected_type)) continue;
      out.push_back(retype(in, a, *in.hint->expected_type));
    }
  }
  return out;
}

std::vector<std::string> use_expected_type(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !in.hint->expected_type || !in.hint->actual_type) return out;
  for (const auto& a : annotations(in)) {
    if (same_type(type_of(in, a), *in.hint->actual_type)) out.push_back(retype(in, a, *in.hint->expected_type));
  }
  return out;
}

std::vector<std::string> modify_return_annotation(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !in.hint->actual_type || is_none(in.hint->actual_type)) return out;
  auto anns = pylex::find_annotations(in.query.buggy_hunk);
  std::erase_if(anns, [](const Annotation& a) { return !a.is_return(); });
  for (const auto& a : anns) {
    auto type = type_of(in, a);
    const bool matches = in.hint->expected_type && same_type(type, *in.hint->expected_type);
    if (!matches && anns.size() > 1) continue;
    for (const auto& v : type_variants(*in.hint->actual_type)) {
      if (!same_type(v, type)) out.push_back(retype(in, a, v));
    }
  }
  return out;
}

std::vector<std::string> modify_variable_annotation(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !in.hint->actual_type || is_none(in.hint->actual_type)) return out;
  for (const auto& a : annotations(in)) {
    if (!targets(a, in.facts.subject)) continue;
    for (const auto& v : type_variants(*in.hint->actual_type)) out.push_back(retype(in, a, v));
  }
  return out;
}

std::vector<std::string> use_union(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !in.hint->expected_type || !in.hint->actual_type || is_none(in.hint->actual_type)) return out;
  for (const auto& a : annotations(in)) {
    auto type = type_of(in, a);
    if (same_type(type, *in.hint->expected_type) || targets(a, in.facts.subject))
      out.push_back(retype(in, a, "Union[" + std::string(type) + ", " + *in.hint->actual_type + "]"));
  }
  return out;
}

std::vector<std::string> insert_cast(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.hint || !in.hint->expected_type || is_none(in.hint->expected_type)) return out;
  const auto& hunk = in.query.buggy_hunk;
  const auto& expected = *in.hint->expected_type;
  auto wrap = [&](std::size_t b, std::size_t e) {
    return replace_range(hunk, b, e, "cast(" + expected + ", " + std::string(slice(hunk, b, e)) + ")");
  };

  if (in.query.error_class.kind() == K::kIncompatibleParameterType) {
    for (const auto& call : calls_in(hunk, in.facts)) {
      for (auto i : argument_positions(call, in.facts)) {
        auto [b, e] = std::pair{call.args[i].begin, call.args[i].end};
        std::string_view arg = slice(hunk, b, e);
        if (arg.starts_with("*")) continue;
        if (keyword_arg(arg)) {
          auto eq = arg.find('=');
          b += eq + 1;
          while (b < e && hunk[b] == ' ') ++b;
        }
        if (b < e) out.push_back(wrap(b, e));
      }
    }
    return out;
  }

  auto [lb, le] = error_line_range(in.query);
  std::string_view line = slice(hunk, lb, le);
  auto toks = pylex::tokenize(line);
  if (toks.empty()) return out;
  std::size_t rhs_begin = std::string_view::npos;
  int depth = 0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    auto tok = slice(line, toks[i].begin, toks[i].end);
    if (toks[i].kind == pylex::TokKind::kOp) {
      if (tok == "(" || tok == "[" || tok == "{") ++depth;
      if (tok == ")" || tok == "]" || tok == "}") --depth;
    }
    if (i == 0 && toks[i].kind == pylex::TokKind::kIdent && tok == "return" && toks.size() > 1) {
      rhs_begin = toks[1].begin;
      break;
    }
    if (depth == 0 && toks[i].kind == pylex::TokKind::kOp && tok == "=" && i + 1 < toks.size()) {
      rhs_begin = toks[i + 1].begin;
      break;
    }
  }
  if (rhs_begin == std::string_view::npos) return out;
  std::size_t rhs_end = toks.back().end;
  auto rhs = slice(line, rhs_begin, rhs_end);
  if (rhs.starts_with("cast(") || !(pylex::bracket_balance(rhs) == pylex::BracketBalance{})) return out;
  out.push_back(wrap(lb + rhs_begin, lb + rhs_end));
  return out;
}

std::vector<std::string> swap_arguments(const TemplateInput& in) {
  std::vector<std::string> out;
  const auto& hunk = in.query.buggy_hunk;
  for (const auto& call : calls_in(hunk, in.facts)) {
    const auto n = call.args.size();
    if (n < 2) continue;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (in.facts.argument_index) {
      auto i = static_cast<std::size_t>(*in.facts.argument_index);
      if (i + 1 < n) pairs.emplace_back(i, i + 1);
      if (i >= 1 && i < n) pairs.emplace_back(i - 1, i);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::find(pairs.begin(), pairs.end(), std::pair{i, i + 1}) == pairs.end()) pairs.emplace_back(i, i + 1);
    }
    for (auto [i, j] : pairs) {
      auto a = call.args[i], b = call.args[j];
      auto ta = slice(hunk, a.begin, a.end), tb = slice(hunk, b.begin, b.end);
      if (keyword_arg(ta) || keyword_arg(tb) || ta.starts_with("*") || tb.starts_with("*") || ta == tb) continue;
      std::string s(hunk.substr(0, a.begin));
      s += tb;
      s += slice(hunk, a.end, b.begin);
      s += ta;
      s += hunk.substr(b.end);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<std::string> remove_annotation(const TemplateInput& in) {
  std::vector<std::string> out;
  const auto& hunk = in.query.buggy_hunk;
  auto anns = annotations(in);
  if (in.hint) {
    auto hinted = [&](const Annotation& a) {
      auto t = type_of(in, a);
      return (in.hint->expected_type && same_type(t, *in.hint->expected_type)) ||
             (in.hint->actual_type && same_type(t, *in.hint->actual_type));
    };
    auto first_rest = std::find_if_not(anns.begin(), anns.end(), [&](const Annotation& a) { return targets(a, in.facts.subject); });
    std::stable_partition(first_rest, anns.end(), hinted);
  }
  for (const auto& a : anns) {
    if (a.is_return()) {
      auto b = a.name_begin;
      while (b > 0 && (hunk[b - 1] == ' ' || hunk[b - 1] == '\t')) --b;
      out.push_back(replace_range(hunk, b, a.type_end, ""));
    } else {
      out.push_back(replace_range(hunk, a.name_end, a.type_end, ""));
    }
  }
  return out;
}

std::vector<std::string> identifier_nearest_match(const TemplateInput& in) {
  std::vector<std::string> out;
  if (!in.facts.subject) return out;
  const std::string unknown(last_component(*in.facts.subject));
  auto pool = pylex::identifiers(in.query.buggy_hunk);
  for (auto& w : pylex::identifiers(in.query.context)) {
    if (std::find(pool.begin(), pool.end(), w) == pool.end()) pool.push_back(std::move(w));
  }
  struct Scored {
    int distance;
    std::size_t order;
    std::string word;
  };
  std::vector<Scored> scored;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i] == unknown) continue;
    int d = levenshtein(unknown, pool[i]);
    if (d <= kMaxIdentifierDistance) scored.push_back({d, i, pool[i]});
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return std::tie(a.distance, a.order) < std::tie(b.distance, b.order); });
  for (const auto& s : scored) out.push_back(pylex::replace_word(in.query.buggy_hunk, unknown, s.word));
  return out;
}

const std::vector<K> kAnnotated{K::kIncompatibleVariableType, K::kIncompatibleParameterType,
                                K::kIncompatibleReturnType, K::kIncompatibleAttributeType};

}  // namespace

bool TemplateRule::applies_to(const ErrorClass& c) const {
  return classes.empty() || std::find(classes.begin(), classes.end(), c.kind()) != classes.end();
}

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

const std::vector<TemplateRule>& default_catalog() {
  static const std::vector<TemplateRule> catalog{
      {"wrap-optional", kAnnotated, wrap_optional},
      {"modify-parameter-annotation", {K::kIncompatibleParameterType}, modify_parameter_annotation},
      {"use-expected-type-in-annotation", {}, use_expected_type},
      {"modify-return-annotation", {K::kIncompatibleReturnType, K::kWeakenedPostcondition}, modify_return_annotation},
      {"modify-variable-annotation", {K::kIncompatibleVariableType, K::kIncompatibleAttributeType},
       modify_variable_annotation},
      {"use-union", kAnnotated, use_union},
      {"insert-cast", kAnnotated, insert_cast},
      {"swap-arguments", {K::kIncompatibleParameterType}, swap_arguments},
      {"remove-annotation",
       {K::kIncompatibleVariableType, K::kIncompatibleParameterType, K::kIncompatibleReturnType,
        K::kIncompatibleAttributeType, K::kInvalidType, K::kStrengthenedPrecondition, K::kWeakenedPostcondition},
       remove_annotation},
      {"identifier-nearest-match", {K::kUnboundName}, identifier_nearest_match},
  };
  return catalog;
}

std::vector<FixCandidate> generate_template(const RepairQuery& query, int k, const std::vector<TemplateRule>& catalog) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  TemplateInput input{query, parse_hint(query.message), parse_facts(query.message)};
  const auto balance = pylex::bracket_balance(query.buggy_hunk);
  std::vector<FixCandidate> out;
  std::set<std::string> seen{query.buggy_hunk};
  for (const auto& rule : catalog) {
    if (!rule.applies_to(query.error_class)) continue;
    for (auto& text : rule.apply(input)) {
      if (static_cast<int>(out.size()) >= k) return out;
      if (text::trim(text).empty() || !(pylex::bracket_balance(text) == balance)) continue;
      if (!seen.insert(text).second) continue;
      out.push_back({std::move(text), static_cast<int>(out.size()) + 1, CandidateSource::templ(rule.name)});
    }
  }
  if (out.empty()) throw EmptyCandidateSet("no template applies to this " + query.error_class.name() + " error");
  return out;
}

std::vector<FixCandidate> TemplateGenerator::generate(const RepairQuery& query, int k) const {
  return catalog_ ? generate_template(query, k, *catalog_) : generate_template(query, k);
}

}  // namespace tyfix
