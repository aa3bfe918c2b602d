// Command-line front end. Subcommands: hash, check, diff, reduce, mine, fix,
// eval, table.

#include <omp.h>

#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "tyfix/checker.hpp"
#include "tyfix/diff.hpp"
#include "tyfix/error.hpp"
#include "tyfix/generators.hpp"
#include "tyfix/metrics.hpp"
#include "tyfix/miner.hpp"
#include "tyfix/reducer.hpp"
#include "tyfix/repair.hpp"
#include "tyfix/subprocess.hpp"
#include "tyfix/text.hpp"

using namespace tyfix;

namespace {

constexpr int kExitNoValidFix = 3;
constexpr int kExitUsage = 2;

CheckerHandle resolve_checker(const std::optional<std::string>& flag) {
  auto spec = checker_spec_from_env(flag);
  if (!spec) throw InvalidArgument("no checker configured: pass --checker-cmd or set TYFIX_CHECKER_CMD");
  return make_checker(*spec);
}

void set_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

std::vector<int> parse_k_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    auto t = text::trim(part);
    if (t.empty()) continue;
    int k = std::stoi(std::string(t));
    if (k < 1) throw InvalidArgument("k values must be positive");
    out.push_back(k);
  }
  if (out.empty()) throw InvalidArgument("empty k list");
  return out;
}

// The diagnostic at line/col (and class, if given) in `report`.
Diagnostic locate(const CheckReport& report, int line, int col, const std::string& cls) {
  for (const auto& d : report.diagnostics) {
    if (d.line != line || d.column != col) continue;
    if (!cls.empty() && !(d.error_class == ErrorClass::parse(cls))) continue;
    return d;
  }
  throw InvalidArgument("the checker reports no diagnostic at line " + std::to_string(line) + ", column " +
                        std::to_string(col));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine minimal type-error fixes from version history and repair type errors."};
  app.require_subcommand(1);

  // hash
  std::string hash_file;
  auto* hash = app.add_subcommand("hash", "Print the fixture key of a file's content");
  hash->add_option("file", hash_file, "File to hash")->required();

  // check
  std::string check_file, check_path;
  std::optional<std::string> checker_cmd;
  auto* check = app.add_subcommand("check", "Run the checker on a file and print protocol lines");
  check->add_option("--file", check_file, "File to check")->required();
  check->add_option("--path", check_path, "Path to report (default: --file)");
  check->add_option("--checker-cmd", checker_cmd, "Checker command or fixture:<table.json>");

  // diff
  std::string diff_old, diff_new;
  auto* diffc = app.add_subcommand("diff", "Print the zero-context unified diff of two files");
  diffc->add_option("old", diff_old)->required();
  diffc->add_option("new", diff_new)->required();

  // reduce
  std::string red_old, red_new, red_path, red_class;
  int red_line = 0, red_col = 0;
  bool red_parallel = false;
  auto* reducec = app.add_subcommand("reduce", "Shrink a commit to the hunks that fix one error");
  reducec->add_option("--old", red_old, "File before the commit")->required();
  reducec->add_option("--new", red_new, "File after the commit")->required();
  reducec->add_option("--line", red_line, "Error line (1-based) in the old file")->required();
  reducec->add_option("--col", red_col, "Error column (0-based)")->required();
  reducec->add_option("--class", red_class, "Error class, to disambiguate");
  reducec->add_option("--path", red_path, "Path to report (default: --old)");
  reducec->add_option("--checker-cmd", checker_cmd, "Checker command or fixture:<table.json>");
  reducec->add_flag("--parallel", red_parallel, "Evaluate the groups of one level concurrently");

  // mine
  std::string mine_pairs, mine_git, mine_out;
  std::uint64_t mine_seed = 0;
  int jobs = 0;
  bool mine_serial_flag = false;
  auto* minec = app.add_subcommand("mine", "Mine a dataset of minimal single-hunk fixes");
  auto* pairs_opt = minec->add_option("--pairs", mine_pairs, "Directory of <name>/before|after pairs");
  auto* git_opt = minec->add_option("--git", mine_git, "Git repository to walk");
  pairs_opt->excludes(git_opt);
  minec->add_option("--checker-cmd", checker_cmd, "Checker command or fixture:<table.json>");
  minec->add_option("--out", mine_out, "Output JSONL")->required();
  minec->add_option("--seed", mine_seed, "Seed of the split shuffle");
  minec->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  minec->add_flag("--serial", mine_serial_flag, "Process pairs one at a time");

  // fix
  std::string fix_file, fix_path, fix_generator = "template", fix_class;
  std::string generator_cmd;
  int fix_line = 0, fix_col = 0, fix_k = 50;
  bool fix_apply = false, fix_parallel = false;
  auto* fixc = app.add_subcommand("fix", "Repair one type error");
  fixc->add_option("--file", fix_file, "File containing the error")->required();
  fixc->add_option("--line", fix_line, "Error line (1-based)")->required();
  fixc->add_option("--col", fix_col, "Error column (0-based)")->required();
  fixc->add_option("--class", fix_class, "Error class, to disambiguate");
  fixc->add_option("--path", fix_path, "Path to report (default: --file)");
  fixc->add_option("--checker-cmd", checker_cmd, "Checker command or fixture:<table.json>");
  fixc->add_option("--generator", fix_generator, "template, external or both")
      ->check(CLI::IsMember({"template", "external", "both"}));
  fixc->add_option("--generator-cmd", generator_cmd, "External generator command");
  fixc->add_option("--k", fix_k, "Candidate budget")->check(CLI::PositiveNumber);
  fixc->add_flag("--apply", fix_apply, "Write the accepted fix back to --file");
  fixc->add_flag("--parallel", fix_parallel, "Validate candidates concurrently");

  // eval
  std::string eval_dataset, eval_out, eval_records, eval_split = "test", eval_k = "1,5,50";
  std::string eval_generator = "template";
  bool eval_serial = false;
  auto* evalc = app.add_subcommand("eval", "Evaluate a generator on a mined dataset");
  evalc->add_option("--dataset", eval_dataset, "Dataset JSONL")->required();
  evalc->add_option("--checker-cmd", checker_cmd, "Checker command or fixture:<table.json>");
  evalc->add_option("--generator", eval_generator, "template, external or both")
      ->check(CLI::IsMember({"template", "external", "both"}));
  evalc->add_option("--generator-cmd", generator_cmd, "External generator command");
  evalc->add_option("--k", eval_k, "Comma-separated k values");
  evalc->add_option("--split", eval_split, "Entries to evaluate: train, valid, test or all")
      ->check(CLI::IsMember({"train", "valid", "test", "all"}));
  evalc->add_option("--out", eval_out, "Metrics JSON output")->required();
  evalc->add_option("--records", eval_records, "Also write per-entry records (JSONL)");
  evalc->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  evalc->add_flag("--serial", eval_serial, "Evaluate entries one at a time");

  // table
  std::string table_records, table_k = "1,5,50";
  auto* tablec = app.add_subcommand("table", "Recompute the metrics table from saved records");
  tablec->add_option("--records", table_records, "Records JSONL from eval")->required();
  tablec->add_option("--k", table_k, "Comma-separated k values");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*hash) {
      std::cout << fixture_key(read_file(hash_file)) << "\n";
      return 0;
    }
    if (*check) {
      const auto checker = resolve_checker(checker_cmd);
      auto report = checker->check(read_file(check_file), check_path.empty() ? check_file : check_path);
      std::cout << render_protocol(report);
      return 0;
    }
    if (*diffc) {
      auto hunks = diff(read_file(diff_old), read_file(diff_new));
      std::cout << render_unified(hunks, diff_old, diff_new);
      return 0;
    }
    if (*reducec) {
      const auto checker = resolve_checker(checker_cmd);
      const auto old = read_file(red_old);
      const auto neu = read_file(red_new);
      const auto path = red_path.empty() ? red_old : red_path;
      CheckCache cache(checker);
      const auto err = locate(cache.check(old, path), red_line, red_col, red_class);
      ReduceOptions opts;
      opts.parallel_groups = red_parallel;
      auto result = reduce(old, neu, err, cache, path, opts);
      std::cout << render_unified(result.hunks, path, path);
      std::cout << to_json(result).dump(2) << "\n";
      return result.status == ReductionStatus::kNotAFix ? 1 : 0;
    }
    if (*minec) {
      if (mine_pairs.empty() && mine_git.empty()) throw InvalidArgument("pass --pairs or --git");
      set_jobs(jobs);
      const auto checker = resolve_checker(checker_cmd);
      auto pairs = mine_pairs.empty() ? load_git_history(mine_git) : load_pair_directory(mine_pairs);
      auto result = mine_serial_flag ? mine_serial(pairs, checker) : mine(pairs, checker);
      assign_splits(result.entries, mine_seed);
      write_jsonl(mine_out, result.entries);
      nlohmann::json summary{{"pairs", pairs.size()},
                             {"fixed_errors", result.fixed_errors},
                             {"entries", result.entries.size()},
                             {"rejections", result.rejections}};
      nlohmann::json failures = nlohmann::json::array();
      for (const auto& f : result.failures)
        failures.push_back({{"repo_id", f.repo_id}, {"commit_id", f.commit_id}, {"file_path", f.file_path},
                            {"reason", f.reason}});
      summary["failures"] = failures;
      std::cout << summary.dump(2) << "\n";
      return 0;
    }
    if (*fixc) {
      const auto checker = resolve_checker(checker_cmd);
      const auto generator = make_generator(fix_generator, generator_cmd);
      const auto content = read_file(fix_file);
      const auto path = fix_path.empty() ? fix_file : fix_path;
      const auto err = locate(checker->check(content, path), fix_line, fix_col, fix_class);
      RepairOptions opts;
      opts.k = fix_k;
      opts.parallel = fix_parallel;
      auto outcome = repair(content, path, err, checker, *generator, opts);
      if (outcome.status == FixStatus::kFixed) {
        std::vector<Hunk> applied{*outcome.applied};
        std::cout << render_unified(applied, path, path);
        if (fix_apply) write_file(fix_file, *outcome.patched_content);
      }
      std::cout << to_json(outcome).dump(2) << "\n";
      return outcome.status == FixStatus::kFixed ? 0 : kExitNoValidFix;
    }
    if (*evalc) {
      set_jobs(jobs);
      const auto checker = resolve_checker(checker_cmd);
      const auto generator = make_generator(eval_generator, generator_cmd);
      auto entries = read_jsonl(eval_dataset);
      if (eval_split != "all") {
        const auto wanted = parse_split(eval_split);
        std::erase_if(entries, [&](const DatasetEntry& e) { return e.split != wanted; });
      }
      EvalOptions opts;
      opts.k_list = parse_k_list(eval_k);
      opts.parallel = !eval_serial;
      auto result = evaluate(entries, checker, *generator, opts);
      auto j = to_json(result.table);
      nlohmann::json stale = nlohmann::json::array();
      for (const auto& r : result.records) {
        if (r.stale)
          stale.push_back({{"commit_id", r.entry.commit_id}, {"file_path", r.entry.file_path},
                           {"line", r.entry.line}, {"reason", r.stale_reason}});
      }
      j["stale"] = stale;
      write_file(eval_out, j.dump(2) + "\n");
      if (!eval_records.empty()) write_records(eval_records, result.records);
      std::cout << render_table(result.table);
      return 0;
    }
    if (*tablec) {
      auto records = read_records(table_records);
      auto table = compute_table(records, parse_k_list(table_k));
      std::cout << render_table(table);
      std::cout << to_json(table).dump(2) << "\n";
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "tyfix: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "tyfix: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
