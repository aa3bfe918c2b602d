#include <algorithm>
#include <set>

#include "tyfix/error.hpp"
#include "tyfix/miner.hpp"
#include "tyfix/subprocess.hpp"
#include "tyfix/text.hpp"

namespace tyfix {

namespace {

constexpr std::chrono::seconds kGitTimeout{120};

std::string git(const std::filesystem::path& repo, std::vector<std::string> args) {
  std::vector<std::string> argv{"git", "-C", repo.string()};
  argv.insert(argv.end(), std::make_move_iterator(args.begin()), std::make_move_iterator(args.end()));
  auto r = run_process(argv, {}, kGitTimeout);
  if (!r.exited_ok()) throw Error("git " + argv[3] + " failed: " + r.err);
  return r.out;
}

std::optional<std::string> git_show(const std::filesystem::path& repo, const std::string& spec) {
  auto r = run_process({"git", "-C", repo.string(), "show", spec}, {}, kGitTimeout);
  if (!r.exited_ok()) return std::nullopt;
  return r.out;
}

std::vector<std::string> split_null(std::string_view s) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin < s.size()) {
    auto end = s.find('\0', begin);
    if (end == std::string_view::npos) end = s.size();
    if (end > begin) out.emplace_back(s.substr(begin, end - begin));
    begin = end + 1;
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> default_commit_keywords() {
  return {{"fixing", "typing"}, {"fixing", "pyre"}, {"fixing", "mypy"},
          {"typing", "bug"},    {"typing", "error"}};
}

std::vector<CommitPair> load_git_history(const std::filesystem::path& repo,
                                         const std::vector<std::vector<std::string>>& keywords,
                                         const std::vector<std::string>& extensions) {
  std::vector<std::string> commits;
  std::set<std::string> seen;
  for (const auto& group : keywords) {
    std::vector<std::string> args{"log", "--format=%H", "-i", "--all-match"};
    for (const auto& word : group) args.push_back("--grep=" + word);
    for (const auto& line : text::split_plain(git(repo, args))) {
      auto id = std::string(text::trim(line));
      if (!id.empty() && seen.insert(id).second) commits.push_back(id);
    }
  }

  const auto repo_id = std::filesystem::weakly_canonical(repo).filename().string();
  std::vector<CommitPair> pairs;
  for (const auto& commit : commits) {
    const auto parents = text::split_plain(git(repo, {"rev-list", "--parents", "-n", "1", commit}));
    if (parents.empty()) continue;
    // "rev-list --parents" prints "<commit> <parent>..." on one line.
    std::vector<std::string> fields;
    std::string_view line = parents.front();
    while (!line.empty()) {
      auto sp = line.find(' ');
      fields.emplace_back(line.substr(0, sp));
      if (sp == std::string_view::npos) break;
      line.remove_prefix(sp + 1);
    }
    if (fields.size() < 2) continue;  // root commit
    const auto& parent = fields[1];

    for (const auto& path :
         split_null(git(repo, {"diff", "--name-only", "--no-renames", "-z", parent, commit}))) {
      const bool wanted = extensions.empty() || std::any_of(extensions.begin(), extensions.end(),
                                                            [&](const auto& ext) { return path.ends_with(ext); });
      if (!wanted) continue;
      auto old_content = git_show(repo, parent + ":" + path);
      auto new_content = git_show(repo, commit + ":" + path);
      if (!old_content || !new_content || *old_content == *new_content) continue;
      pairs.push_back({repo_id, commit, path, std::move(*old_content), std::move(*new_content)});
    }
  }
  return pairs;
}

}  // namespace tyfix
