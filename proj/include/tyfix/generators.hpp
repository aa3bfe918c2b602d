#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tyfix/diagnostics.hpp"

namespace tyfix {

/// Everything a generator sees about one error.
struct RepairQuery {
  ErrorClass error_class;
  std::string message;
  std::string error_line_text;
  std::string buggy_hunk;  // lines joined by "\n"
  std::string context;     // surrounding lines, may be empty
};

struct CandidateSource {
  enum class Kind { kTemplate, kExternal };
  Kind kind = Kind::kTemplate;
  std::string tag;  // template rule name or external generator tag

  static CandidateSource templ(std::string name) { return {Kind::kTemplate, std::move(name)}; }
  static CandidateSource external(std::string tag) { return {Kind::kExternal, std::move(tag)}; }
  std::string describe() const;
  bool operator==(const CandidateSource&) const = default;
};

struct FixCandidate {
  std::string replacement_hunk;
  int rank = 1;  // 1-based
  CandidateSource source;
  bool operator==(const FixCandidate&) const = default;
};

nlohmann::json to_json(const FixCandidate& c);

/// Expected and actual types recovered from a checker message.
struct TypeHint {
  std::optional<std::string> expected_type;
  std::optional<std::string> actual_type;
  bool operator==(const TypeHint&) const = default;
};

/// Recognizes the common "expected X but got Y" phrasings. Messages without
/// a type pair (unbound names, call arity, operators, ...) yield nullopt.
std::optional<TypeHint> parse_hint(std::string_view message);

/// Facts pulled from a message besides the type pair.
struct MessageFacts {
  std::optional<std::string> subject;   // variable, attribute or unbound name
  std::optional<std::string> callee;    // last component of the called name
  std::optional<int> argument_index;    // 0-based, from "1st", "2nd", ...
  std::optional<std::string> parameter; // parameter name when quoted
};
MessageFacts parse_facts(std::string_view message);

/// Template rules. Each one maps a query to zero or more rewritten hunks;
/// the catalog order is the candidate priority.
struct TemplateInput {
  const RepairQuery& query;
  std::optional<TypeHint> hint;
  MessageFacts facts;
};

struct TemplateRule {
  std::string name;
  std::vector<ErrorClass::Kind> classes;  // empty: any class
  std::function<std::vector<std::string>(const TemplateInput&)> apply;

  bool applies_to(const ErrorClass& c) const;
};

const std::vector<TemplateRule>& default_catalog();

/// Distance bound for nearest-identifier substitution.
inline constexpr int kMaxIdentifierDistance = 2;
int levenshtein(std::string_view a, std::string_view b);

/// Up to k distinct rewrites, none equal to the buggy hunk, all with the
/// buggy hunk's bracket balance. Throws EmptyCandidateSet if no rule fires.
std::vector<FixCandidate> generate_template(const RepairQuery& query, int k,
                                            const std::vector<TemplateRule>& catalog = default_catalog());

/// Request sent to an external generator on stdin.
nlohmann::json external_request(const RepairQuery& query, int k);

/// Runs `command` through the shell with the request on stdin; stdout must be
/// a JSON array of replacement strings (best first). Throws GeneratorFailure.
std::vector<FixCandidate> generate_external(const RepairQuery& query, int k, const std::string& command,
                                            std::chrono::milliseconds timeout = std::chrono::seconds(120));

class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  virtual std::vector<FixCandidate> generate(const RepairQuery& query, int k) const = 0;
  virtual std::string name() const = 0;
};
using GeneratorHandle = std::shared_ptr<const CandidateGenerator>;

class TemplateGenerator : public CandidateGenerator {
 public:
  TemplateGenerator() = default;
  explicit TemplateGenerator(std::vector<TemplateRule> catalog) : catalog_(std::move(catalog)) {}
  std::vector<FixCandidate> generate(const RepairQuery& query, int k) const override;
  std::string name() const override { return "template"; }

 private:
  std::optional<std::vector<TemplateRule>> catalog_;
};

class ExternalGenerator : public CandidateGenerator {
 public:
  explicit ExternalGenerator(std::string command, std::chrono::milliseconds timeout = std::chrono::seconds(120))
      : command_(std::move(command)), timeout_(timeout) {}
  std::vector<FixCandidate> generate(const RepairQuery& query, int k) const override;
  std::string name() const override { return "external"; }

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

/// Concatenates the candidates of several generators, keeping the first copy
/// of each distinct hunk, and re-ranks. Fails only if every member fails.
class CompositeGenerator : public CandidateGenerator {
 public:
  explicit CompositeGenerator(std::vector<GeneratorHandle> members) : members_(std::move(members)) {}
  std::vector<FixCandidate> generate(const RepairQuery& query, int k) const override;
  std::string name() const override;

 private:
  std::vector<GeneratorHandle> members_;
};

/// "template", "external" or "both".
GeneratorHandle make_generator(const std::string& kind, const std::string& external_command = {});

}  // namespace tyfix
