#pragma once

// Lightweight Python lexing: enough structure to find identifiers, string
// literals, brackets and annotations without a real parser.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tyfix::pylex {

enum class TokKind { kIdent, kString, kNumber, kOp, kNewline };

struct Token {
  TokKind kind;
  std::size_t begin;
  std::size_t end;
};

/// Tokenizes text. Comments are dropped; string literals (any prefix, single
/// or triple quoted) are single tokens; unterminated strings run to the end
/// of their line (or of the text, for triple quotes).
std::vector<Token> tokenize(std::string_view text);

bool is_keyword(std::string_view word);
bool is_ident_start(char c);
bool is_ident_char(char c);

/// Bracket depth at the start of every line (0-based index), ignoring
/// brackets in strings and comments. Also marks lines that end with a
/// backslash continuation.
struct LineShape {
  std::vector<int> depth_at_start;
  std::vector<int> depth_at_end;
  std::vector<bool> continued;  // ends with '\'
  std::vector<bool> in_string;  // starts inside a triple-quoted string
};
LineShape line_shape(const std::vector<std::string>& lines);

/// A variable, parameter or return annotation.
struct Annotation {
  std::string target;  // annotated name; "->" for return annotations
  std::size_t name_begin;
  std::size_t name_end;
  std::size_t type_begin;
  std::size_t type_end;
  bool is_return() const { return target == "->"; }
};
std::vector<Annotation> find_annotations(std::string_view text);

/// A call `name(args...)` whose closing parenthesis lies inside the text.
struct Call {
  std::string name;  // last dotted component
  std::size_t name_begin;
  std::size_t open;
  std::size_t close;
  struct Arg {
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Arg> args;
};
std::vector<Call> find_calls(std::string_view text);

/// Identifier-like words in order of first occurrence, including those
/// inside string literals (f-string fields are code).
std::vector<std::string> identifiers(std::string_view text);

/// Replaces every whole-word occurrence of `from`.
std::string replace_word(std::string_view text, std::string_view from, std::string_view to);

/// Net count of each bracket kind: ( [ { minus ) ] }.
struct BracketBalance {
  int paren = 0, square = 0, curly = 0;
  bool operator==(const BracketBalance&) const = default;
};
BracketBalance bracket_balance(std::string_view text);

/// Type text with all whitespace removed, for comparisons.
std::string squash(std::string_view type);

}  // namespace tyfix::pylex
