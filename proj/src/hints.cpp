#include <regex>

#include "tyfix/generators.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

namespace {

// A quoted type or name: `x` or 'x'. Two capture groups, one of which is set.
const std::string kQuoted = R"((?:`([^`]+)`|'([^']+)'))";

// Optional "Class name [code]:" prefix in front of the message body.
const std::string kLead = R"(^\s*(?:[A-Za-z ]+(?:\[\d+\])?:\s*)?)";

std::string pick(const std::smatch& m, std::size_t first) {
  return m[first].matched ? m[first].str() : m[first + 1].str();
}

struct HintForm {
  std::regex pattern;
  bool swapped;  // first capture is the actual type
};

const std::vector<HintForm>& hint_forms() {
  static const std::vector<HintForm> forms = [] {
    const auto flags = std::regex::ECMAScript | std::regex::icase;
    std::vector<HintForm> v;
    v.push_back({std::regex("declared to have type " + kQuoted + " but (?:is )?used as type " + kQuoted, flags), false});
    v.push_back({std::regex("has type " + kQuoted + " but is used as type " + kQuoted, flags), false});
    v.push_back({std::regex("expected " + kQuoted + ",\\s*got " + kQuoted, flags), false});
    v.push_back({std::regex("expected " + kQuoted + ".*?but got " + kQuoted, flags), false});
    v.push_back({std::regex("(?:returned type|parameter of type|type) " + kQuoted +
                                " is not a (?:sub|super)type of the overridden (?:return|parameter|attribute)(?: type)? " +
                                kQuoted,
                            flags),
                 true});
    return v;
  }();
  return forms;
}

}  // namespace

std::optional<TypeHint> parse_hint(std::string_view message) {
  try {
    const std::string msg(message);
    for (const auto& form : hint_forms()) {
      std::smatch m;
      if (!std::regex_search(msg, m, form.pattern)) continue;
      const std::string first(text::trim(pick(m, 1)));
      const std::string second(text::trim(pick(m, 3)));
      TypeHint hint;
      hint.expected_type = form.swapped ? second : first;
      hint.actual_type = form.swapped ? first : second;
      return hint;
    }
  } catch (const std::exception&) {
    // A pathological message (regex complexity limits) simply has no hint.
  }
  return std::nullopt;
}

MessageFacts parse_facts(std::string_view message) {
  MessageFacts facts;
  const std::string msg(message);
  const auto flags = std::regex::ECMAScript | std::regex::icase;
  try {
    static const std::regex subject_forms[] = {
        std::regex("name " + kQuoted + " is used but not defined", flags),
        std::regex("attribute " + kQuoted + " declared", flags),
        std::regex(kLead + kQuoted + " (?:is declared|has type)", flags),
        std::regex(kLead + "([A-Za-z_][A-Za-z0-9_.]*) (?:is declared|has type)", flags),
    };
    for (const auto& re : subject_forms) {
      std::smatch m;
      if (!std::regex_search(msg, m, re)) continue;
      facts.subject = m.size() > 2 ? pick(m, 1) : m[1].str();
      break;
    }

    static const std::regex callee_call("call " + kQuoted, flags);
    static const std::regex callee_lead(kLead + kQuoted + " for \\d+(?:st|nd|rd|th)", flags);
    std::smatch m;
    if (std::regex_search(msg, m, callee_call) || std::regex_search(msg, m, callee_lead)) {
      auto name = pick(m, 1);
      auto dot = name.rfind('.');
      facts.callee = dot == std::string::npos ? name : name.substr(dot + 1);
    }

    static const std::regex ordinal("(\\d+)(?:st|nd|rd|th) (?:positional (?:only )?)?(?:parameter|argument)", flags);
    if (std::regex_search(msg, m, ordinal)) {
      int n = std::stoi(m[1].str());
      if (n >= 1) facts.argument_index = n - 1;
    }

    static const std::regex param("(?:parameter|argument) " + kQuoted, flags);
    if (std::regex_search(msg, m, param)) facts.parameter = pick(m, 1);
  } catch (const std::exception&) {
  }
  return facts;
}

}  // namespace tyfix
