#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tyfix/generators.hpp"

namespace tyfix {

inline constexpr std::string_view kIndentMarker = "<IND>";
inline constexpr std::string_view kDedentMarker = "<DED>";
// Prefixed to a line whose own text starts with one of the markers.
inline constexpr std::string_view kEscapeMarker = "<ESC>";

/// Source text with indentation changes replaced by markers. Every non-blank
/// line loses its leading whitespace; blank lines are kept verbatim.
struct IndentedText {
  std::string text;
  // Indent string introduced by each <IND>, in order of appearance.
  std::vector<std::string> pushes;
  // Set when some line dedented to a width not on the indent stack.
  bool inconsistent = false;
};

IndentedText tokenize_indent(std::string_view source);

/// Re-creates indentation. A <IND> uses the next recorded push when that
/// push extends the current indent, otherwise the current indent plus
/// `unit`. Throws MalformedMarkers when a <DED> would pop the base level.
std::string detokenize_indent(const IndentedText& t, std::string_view unit = "    ");
std::string detokenize_indent(std::string_view marked, std::string_view unit = "    ");

/// "fix <class> <message> <error line> :"
std::string format_task(const RepairQuery& query);

/// Task and tokenized hunk as one string, "<task> <input>".
std::string compose_model_input(const RepairQuery& query);

/// Inverse of compose_model_input for inputs whose message and error line
/// do not contain " : ".
std::pair<std::string, std::string> split_model_input(std::string_view text);

}  // namespace tyfix
