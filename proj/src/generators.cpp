#include "tyfix/generators.hpp"

#include <set>

#include "tyfix/error.hpp"
#include "tyfix/indent.hpp"
#include "tyfix/subprocess.hpp"

namespace tyfix {

std::string CandidateSource::describe() const {
  return (kind == Kind::kTemplate ? "Template(" : "External(") + tag + ")";
}

nlohmann::json to_json(const FixCandidate& c) {
  return {{"replacement_hunk", c.replacement_hunk},
          {"rank", c.rank},
          {"source", {{"kind", c.source.kind == CandidateSource::Kind::kTemplate ? "template" : "external"},
                      {"tag", c.source.tag}}}};
}

nlohmann::json external_request(const RepairQuery& query, int k) {
  return {{"task", format_task(query)}, {"input", tokenize_indent(query.buggy_hunk).text}, {"k", k}};
}

std::vector<FixCandidate> generate_external(const RepairQuery& query, int k, const std::string& command,
                                            std::chrono::milliseconds timeout) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (command.empty()) throw GeneratorFailure("no external generator command configured");
  const auto request = external_request(query, k).dump() + "\n";
  ProcessResult r;
  try {
    r = run_shell(command, {}, request, timeout);
  } catch (const Error& e) {
    throw GeneratorFailure(std::string("could not start generator: ") + e.what());
  }
  if (r.timed_out) throw GeneratorFailure("generator timed out");
  if (!r.exited_ok()) {
    throw GeneratorFailure("generator exited abnormally (status " + std::to_string(r.exit_code) +
                           ", signal " + std::to_string(r.term_signal) + "): " + r.err);
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(r.out);
  } catch (const nlohmann::json::exception& e) {
    throw GeneratorFailure(std::string("generator output is not JSON: ") + e.what());
  }
  if (!reply.is_array()) throw GeneratorFailure("generator output is not a JSON array");
  std::vector<FixCandidate> out;
  for (const auto& item : reply) {
    if (!item.is_string()) throw GeneratorFailure("generator output contains a non-string element");
    if (static_cast<int>(out.size()) == k) break;
    out.push_back({item.get<std::string>(), static_cast<int>(out.size()) + 1, CandidateSource::external("external")});
  }
  return out;
}

std::vector<FixCandidate> ExternalGenerator::generate(const RepairQuery& query, int k) const {
  return generate_external(query, k, command_, timeout_);
}

std::vector<FixCandidate> CompositeGenerator::generate(const RepairQuery& query, int k) const {
  std::vector<FixCandidate> out;
  std::set<std::string> seen;
  std::string failures;
  int failed = 0;
  for (const auto& member : members_) {
    std::vector<FixCandidate> got;
    try {
      got = member->generate(query, k);
    } catch (const Error& e) {
      ++failed;
      failures += (failures.empty() ? "" : "; ") + member->name() + ": " + e.what();
      continue;
    }
    for (auto& c : got) {
      if (static_cast<int>(out.size()) == k) return out;
      if (!seen.insert(c.replacement_hunk).second) continue;
      c.rank = static_cast<int>(out.size()) + 1;
      out.push_back(std::move(c));
    }
  }
  if (failed == static_cast<int>(members_.size()) && failed > 0) throw GeneratorFailure(failures);
  return out;
}

std::string CompositeGenerator::name() const {
  std::string n;
  for (const auto& m : members_) n += (n.empty() ? "" : "+") + m->name();
  return n;
}

GeneratorHandle make_generator(const std::string& kind, const std::string& external_command) {
  if (kind == "template") return std::make_shared<TemplateGenerator>();
  if (kind == "external") return std::make_shared<ExternalGenerator>(external_command);
  if (kind == "both") {
    return std::make_shared<CompositeGenerator>(std::vector<GeneratorHandle>{
        std::make_shared<TemplateGenerator>(), std::make_shared<ExternalGenerator>(external_command)});
  }
  throw InvalidArgument("unknown generator kind '" + kind + "' (expected template, external or both)");
}

}  // namespace tyfix
