#include "pylex.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace tyfix::pylex {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

bool is_keyword(std::string_view word) {
  static const std::set<std::string_view> kKeywords{
      "False", "None",   "True",    "and",      "as",       "assert", "async",  "await",
      "break", "class",  "continue", "def",     "del",      "elif",   "else",   "except",
      "finally", "for",  "from",    "global",   "if",       "import", "in",     "is",
      "lambda", "nonlocal", "not",  "or",       "pass",     "raise",  "return", "try",
      "while", "with",   "yield",   "match",    "case"};
  return kKeywords.contains(word);
}

namespace {

bool is_string_prefix(std::string_view p) {
  if (p.size() > 2) return false;
  for (char c : p) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'r': case 'b': case 'u': case 'f': break;
      default: return false;
    }
  }
  return true;
}

// Position just past a string literal whose opening quote is at `q`.
std::size_t skip_string(std::string_view text, std::size_t q) {
  const char quote = text[q];
  const bool triple = q + 2 < text.size() && text[q + 1] == quote && text[q + 2] == quote;
  std::size_t i = q + (triple ? 3 : 1);
  while (i < text.size()) {
    char c = text[i];
    if (c == '\\') {
      i += 2;
      continue;
    }
    if (!triple && c == '\n') return i;
    if (c == quote) {
      if (!triple) return i + 1;
      if (i + 2 < text.size() && text[i + 1] == quote && text[i + 2] == quote) return i + 3;
    }
    ++i;
  }
  return text.size();
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      out.push_back({TokKind::kNewline, i, i + 1});
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      ++i;
    } else if (c == '\\' && i + 1 < text.size() && (text[i + 1] == '\n' || text[i + 1] == '\r')) {
      i += text[i + 1] == '\r' && i + 2 < text.size() && text[i + 2] == '\n' ? 3 : 2;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '"' || c == '\'') {
      auto end = skip_string(text, i);
      out.push_back({TokKind::kString, i, end});
      i = end;
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      if (j < text.size() && (text[j] == '"' || text[j] == '\'') && is_string_prefix(text.substr(i, j - i))) {
        auto end = skip_string(text, j);
        out.push_back({TokKind::kString, i, end});
        i = end;
      } else {
        out.push_back({TokKind::kIdent, i, j});
        i = j;
      }
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i + 1;
      while (j < text.size() && (is_ident_char(text[j]) || text[j] == '.')) ++j;
      out.push_back({TokKind::kNumber, i, j});
      i = j;
    } else {
      static constexpr std::array<std::string_view, 12> kTwo{"->", "==", "!=", "<=", ">=", ":=",
                                                            "**", "//", "<<", ">>", "+=", "-="};
      std::size_t len = 1;
      for (auto op : kTwo) {
        if (text.substr(i, 2) == op) {
          len = 2;
          break;
        }
      }
      // Other augmented assignments (*=, /=, ...) are two characters too.
      if (len == 1 && i + 1 < text.size() && text[i + 1] == '=' && std::string_view("*/%&|^@").find(c) != std::string_view::npos)
        len = 2;
      out.push_back({TokKind::kOp, i, i + len});
      i += len;
    }
  }
  return out;
}

LineShape line_shape(const std::vector<std::string>& lines) {
  LineShape shape;
  int depth = 0;
  bool in_triple = false;
  char triple_quote = 0;
  for (const auto& raw : lines) {
    shape.depth_at_start.push_back(depth);
    shape.in_string.push_back(in_triple);
    std::string_view line = raw;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
    bool continued = false;
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (in_triple) {
        if (c == '\\') {
          i += 2;
          continue;
        }
        if (c == triple_quote && line.substr(i, 3) == std::string(3, triple_quote)) {
          in_triple = false;
          i += 3;
          continue;
        }
        ++i;
        continue;
      }
      if (c == '#') break;
      if (c == '"' || c == '\'') {
        if (line.substr(i, 3) == std::string(3, c)) {
          auto end = skip_string(line, i);
          bool closed = end >= i + 6 && line.substr(end - 3, 3) == std::string(3, c);
          if (!closed) {
            in_triple = true;
            triple_quote = c;
            break;
          }
          i = end;
        } else {
          i = skip_string(line, i);
        }
        continue;
      }
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') depth = std::max(0, depth - 1);
      if (c == '\\' && i + 1 == line.size()) continued = true;
      ++i;
    }
    shape.depth_at_end.push_back(depth);
    shape.continued.push_back(continued);
  }
  return shape;
}

namespace {

bool is_op(std::string_view text, const Token& t, std::string_view op) {
  return t.kind == TokKind::kOp && text.substr(t.begin, t.end - t.begin) == op;
}

bool is_open(std::string_view text, const Token& t) {
  return is_op(text, t, "(") || is_op(text, t, "[") || is_op(text, t, "{");
}

bool is_close(std::string_view text, const Token& t) {
  return is_op(text, t, ")") || is_op(text, t, "]") || is_op(text, t, "}");
}

// Token index one past the end of a type expression starting at `i`.
std::size_t type_end(std::string_view text, const std::vector<Token>& toks, std::size_t i) {
  int depth = 0;
  std::size_t j = i;
  for (; j < toks.size(); ++j) {
    const auto& t = toks[j];
    if (t.kind == TokKind::kNewline && depth == 0) break;
    if (is_open(text, t)) {
      ++depth;
      continue;
    }
    if (is_close(text, t)) {
      if (depth == 0) break;
      --depth;
      continue;
    }
    if (depth == 0 && (is_op(text, t, ",") || is_op(text, t, "=") || is_op(text, t, ":") ||
                       is_op(text, t, ";"))) {
      break;
    }
  }
  return j;
}

}  // namespace

std::vector<Annotation> find_annotations(std::string_view text) {
  const auto toks = tokenize(text);
  std::vector<Annotation> out;
  std::vector<char> stack;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.kind == TokKind::kOp) {
      char c = text[t.begin];
      if (t.end - t.begin == 1 && (c == '(' || c == '[' || c == '{')) stack.push_back(c);
      if (t.end - t.begin == 1 && (c == ')' || c == ']' || c == '}') && !stack.empty()) stack.pop_back();
    }

    if (is_op(text, t, "->")) {
      auto e = type_end(text, toks, i + 1);
      if (e > i + 1) out.push_back({"->", t.begin, t.end, toks[i + 1].begin, toks[e - 1].end});
      continue;
    }
    if (t.kind != TokKind::kIdent || i + 1 >= toks.size() || !is_op(text, toks[i + 1], ":")) continue;
    auto name = text.substr(t.begin, t.end - t.begin);
    if (is_keyword(name)) continue;
    if (!stack.empty() && stack.back() != '(') continue;

    // Walk back over a dotted chain such as self.attr.
    std::size_t start = i;
    while (start >= 2 && is_op(text, toks[start - 1], ".") && toks[start - 2].kind == TokKind::kIdent) start -= 2;
    bool ok = false;
    if (start == 0) {
      ok = true;
    } else {
      const auto& prev = toks[start - 1];
      if (prev.kind == TokKind::kNewline) ok = true;
      else if (start == i && (is_op(text, prev, ",") || is_op(text, prev, "(") || is_op(text, prev, "*") ||
                              is_op(text, prev, "**")))
        ok = true;
    }
    if (!ok) continue;
    auto e = type_end(text, toks, i + 2);
    if (e <= i + 2) continue;
    std::string target(text.substr(toks[start].begin, t.end - toks[start].begin));
    out.push_back({target, toks[start].begin, t.end, toks[i + 2].begin, toks[e - 1].end});
  }
  return out;
}

std::vector<Call> find_calls(std::string_view text) {
  const auto toks = tokenize(text);
  std::vector<Call> out;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i].kind != TokKind::kIdent || !is_op(text, toks[i + 1], "(")) continue;
    auto name = text.substr(toks[i].begin, toks[i].end - toks[i].begin);
    if (is_keyword(name) && name != "print") continue;
    if (i > 0 && toks[i - 1].kind == TokKind::kIdent) {
      auto prev = text.substr(toks[i - 1].begin, toks[i - 1].end - toks[i - 1].begin);
      if (prev == "def" || prev == "class") continue;
    }

    Call call{std::string(name), toks[i].begin, toks[i + 1].begin, 0, {}};
    int depth = 0;
    std::size_t arg_start = i + 2;
    bool closed = false;
    for (std::size_t j = i + 2; j < toks.size(); ++j) {
      const auto& t = toks[j];
      if (is_open(text, t)) {
        ++depth;
      } else if (is_close(text, t)) {
        if (depth == 0) {
          if (j > arg_start) call.args.push_back({toks[arg_start].begin, toks[j - 1].end});
          call.close = t.begin;
          closed = true;
          break;
        }
        --depth;
      } else if (depth == 0 && is_op(text, t, ",")) {
        if (j > arg_start) call.args.push_back({toks[arg_start].begin, toks[j - 1].end});
        arg_start = j + 1;
      }
    }
    if (closed) out.push_back(std::move(call));
  }
  return out;
}

std::vector<std::string> identifiers(std::string_view text) {
  std::vector<std::string> out;
  std::set<std::string, std::less<>> seen;
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_ident_start(text[i]) && (i == 0 || !is_ident_char(text[i - 1]))) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      std::string word(text.substr(i, j - i));
      if (!is_keyword(word) && seen.insert(word).second) out.push_back(std::move(word));
      i = j;
    } else {
      ++i;
    }
  }
  return out;
}

std::string replace_word(std::string_view text, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.substr(i, from.size()) == from && (i == 0 || !is_ident_char(text[i - 1])) &&
        (i + from.size() == text.size() || !is_ident_char(text[i + from.size()]))) {
      out += to;
      i += from.size();
    } else {
      out += text[i++];
    }
  }
  return out;
}

BracketBalance bracket_balance(std::string_view text) {
  BracketBalance b;
  for (const auto& t : tokenize(text)) {
    if (t.kind != TokKind::kOp || t.end - t.begin != 1) continue;
    switch (text[t.begin]) {
      case '(': ++b.paren; break;
      case ')': --b.paren; break;
      case '[': ++b.square; break;
      case ']': --b.square; break;
      case '{': ++b.curly; break;
      case '}': --b.curly; break;
      default: break;
    }
  }
  return b;
}

std::string squash(std::string_view type) {
  std::string out;
  for (char c : type) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

}  // namespace tyfix::pylex
