#include "tyfix/indent.hpp"

#include "tyfix/error.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

namespace {

std::size_t indent_width(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\f')) ++i;
  return i;
}

bool starts_with_marker(std::string_view s) {
  return s.starts_with(kIndentMarker) || s.starts_with(kDedentMarker) || s.starts_with(kEscapeMarker);
}

}  // namespace

IndentedText tokenize_indent(std::string_view source) {
  IndentedText out;
  std::vector<std::string> stack{""};
  for (const auto& line : text::split_lines(source)) {
    if (text::is_blank(line)) {
      out.text += line;
      continue;
    }
    const auto w = indent_width(line);
    const std::string indent = line.substr(0, w);
    bool popped = false;
    while (!indent.starts_with(stack.back())) {
      stack.pop_back();
      out.text += kDedentMarker;
      popped = true;
    }
    if (stack.back() != indent) {
      if (popped) out.inconsistent = true;
      stack.push_back(indent);
      out.pushes.push_back(indent);
      out.text += kIndentMarker;
    }
    std::string_view rest = std::string_view(line).substr(w);
    if (starts_with_marker(rest)) out.text += kEscapeMarker;
    out.text += rest;
  }
  return out;
}

std::string detokenize_indent(const IndentedText& t, std::string_view unit) {
  // Text without markers is entirely at the base level, which is its own
  // tokenization.
  if (t.text.find(kIndentMarker) == std::string::npos && t.text.find(kDedentMarker) == std::string::npos &&
      t.text.find(kEscapeMarker) == std::string::npos)
    return t.text;
  std::string out;
  std::vector<std::string> stack{""};
  std::size_t next_push = 0;
  for (const auto& line : text::split_lines(t.text)) {
    if (text::is_blank(line)) {
      out += line;
      continue;
    }
    std::string_view rest = line;
    // Tolerate whitespace a generator may put before or between markers.
    for (;;) {
      rest = rest.substr(indent_width(rest));
      if (rest.starts_with(kIndentMarker)) {
        const auto& top = stack.back();
        if (next_push < t.pushes.size() && t.pushes[next_push].size() > top.size() &&
            t.pushes[next_push].starts_with(top)) {
          stack.push_back(t.pushes[next_push]);
        } else {
          stack.push_back(top + std::string(unit));
        }
        ++next_push;
        rest.remove_prefix(kIndentMarker.size());
      } else if (rest.starts_with(kDedentMarker)) {
        if (stack.size() == 1) throw MalformedMarkers("<DED> below the base indentation level");
        stack.pop_back();
        rest.remove_prefix(kDedentMarker.size());
      } else {
        break;
      }
    }
    if (rest.starts_with(kEscapeMarker)) rest.remove_prefix(kEscapeMarker.size());
    if (text::is_blank(rest)) {
      out += text::eol_of(line);
      continue;
    }
    out += stack.back();
    out += rest;
  }
  return out;
}

std::string detokenize_indent(std::string_view marked, std::string_view unit) {
  IndentedText t;
  t.text = marked;
  return detokenize_indent(t, unit);
}

std::string format_task(const RepairQuery& query) {
  return "fix " + query.error_class.name() + " " + query.message + " " +
         std::string(text::trim(query.error_line_text)) + " :";
}

std::string compose_model_input(const RepairQuery& query) {
  return format_task(query) + " " + tokenize_indent(query.buggy_hunk).text;
}

std::pair<std::string, std::string> split_model_input(std::string_view s) {
  auto pos = s.find(" : ");
  if (pos == std::string_view::npos) return {std::string(s), ""};
  return {std::string(s.substr(0, pos + 2)), std::string(s.substr(pos + 3))};
}

}  // namespace tyfix
