#pragma once

// Command-line front end. run_cli() is the whole program; main() only
// forwards argv.
//
// Exit codes: 0 ok, 1 validation failed, 2 bad flags, 3 overflow,
// 4 bad rank, 5 I/O or corrupt input.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bwgen/core.hpp"
#include "bwgen/dataset.hpp"
#include "bwgen/enumerate.hpp"
#include "bwgen/error.hpp"
#include "bwgen/io.hpp"
#include "bwgen/plan.hpp"
#include "bwgen/strips/ground.hpp"
#include "bwgen/strips/models.hpp"
#include "bwgen/strips/parser.hpp"

namespace bwgen::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailed = 1,
  kBadFlags = 2,
  kOverflow = 3,
  kBadRank = 4,
  kIoError = 5,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow: return kOverflow;
    case ErrorKind::RankOutOfRange:
    case ErrorKind::MismatchedEnvironment: return kBadRank;
    case ErrorKind::IoError:
    case ErrorKind::CorruptArchive:
    case ErrorKind::UnsupportedVersion:
    case ErrorKind::ShardMismatch:
    case ErrorKind::MissingShard:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnsupportedFeature:
    case ErrorKind::ArityMismatch:
    case ErrorKind::UndeclaredPredicate:
    case ErrorKind::UndeclaredObject:
    case ErrorKind::UndeclaredVariable:
    case ErrorKind::InvalidSchema: return kIoError;
    case ErrorKind::Unreachable:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::InapplicableAction: return kValidationFailed;
    default: return kBadFlags;
  }
}

namespace detail {

struct Common {
  std::size_t blocks = 4;
  std::size_t stacks = 3;
  std::uint64_t seed = 42;
  std::string out;
  bool quiet = false;
};

inline void add_env(CLI::App* cmd, Common& c) {
  cmd->add_option("--blocks", c.blocks, "number of blocks")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--stacks", c.stacks, "number of stacks")->check(CLI::PositiveNumber)->capture_default_str();
}

inline void add_io(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output path (default: stdout)");
  cmd->add_flag("--quiet", c.quiet, "suppress informational output");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  return parse_guard([&] { return json::parse(text); });
}

/// Writes to --out atomically (temp + rename) or to stdout.
inline void emit_output(const Common& c, const std::string& payload, std::ostream& out) {
  if (c.out.empty()) {
    out << payload;
    return;
  }
  const std::filesystem::path path(c.out);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    f << payload;
    if (!f) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "rename to " + path.string() + ": " + ec.message());
}

struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline strips::ClassicState read_classic_state(const std::string& path) {
  const json j = read_json_file(path);
  return parse_guard([&] {
    const auto towers = j.at("towers").get<std::vector<std::vector<int>>>();
    std::size_t n = 0;
    for (const auto& t : towers) n += t.size();
    return strips::ClassicState::from_towers(n, towers);
  });
}

inline std::string report_line(const ValidationReport& r) {
  if (r.ok) return "ok";
  return std::string("failed at step ") + std::to_string(*r.fail_step) + ": " +
         (*r.reason == FailReason::Inapplicable ? "inapplicable" : "goal unmet");
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Common;
  CLI::App app{"Extended Blocksworld generator, planner and dataset exporter", "bwgen"};
  app.require_subcommand(1);
  Common c;

  // enumerate
  bool count_only = false;
  std::uint64_t shard_index = 0;
  std::uint64_t num_shards = 1;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "count or list states and transitions");
  detail::add_env(enumerate_cmd, c);
  detail::add_io(enumerate_cmd, c);
  enumerate_cmd->add_flag("--count-only", count_only, "print counts only");
  enumerate_cmd->add_option("--shard", shard_index, "shard index");
  enumerate_cmd->add_option("--num-shards", num_shards, "number of shards")->check(CLI::PositiveNumber);

  // pddl domain / problem
  std::string model = "extended";
  std::optional<StateRank> init_rank, goal_rank;
  std::string init_state_file, goal_state_file;
  auto* pddl_cmd = app.add_subcommand("pddl", "emit PDDL domains and problems");
  pddl_cmd->require_subcommand(1);
  auto* domain_cmd = pddl_cmd->add_subcommand("domain", "emit a domain file");
  auto* problem_cmd = pddl_cmd->add_subcommand("problem", "emit a problem file");
  for (auto* cmd : {domain_cmd, problem_cmd}) {
    detail::add_env(cmd, c);
    detail::add_io(cmd, c);
    cmd->add_option("--model", model, "classic4 or extended")
        ->check(CLI::IsMember({"classic4", "extended"}))
        ->capture_default_str();
  }
  problem_cmd->add_option("--init", init_rank, "initial state rank (extended)");
  problem_cmd->add_option("--goal", goal_rank, "goal state rank (extended)");
  problem_cmd->add_option("--init-state", init_state_file, "initial state JSON {\"towers\": [...]} (classic4)");
  problem_cmd->add_option("--goal-state", goal_state_file, "goal state JSON (classic4)");

  // gen-instances
  std::vector<std::uint32_t> steps{3, 7, 14};
  std::size_t per_step = 10;
  auto* gen_cmd = app.add_subcommand("gen-instances", "random-walk planning instances");
  detail::add_env(gen_cmd, c);
  detail::add_io(gen_cmd, c);
  gen_cmd->add_option("--steps", steps, "walk lengths")->delimiter(',')->capture_default_str();
  gen_cmd->add_option("--per-step", per_step, "instances per walk length")->capture_default_str();
  gen_cmd->add_option("--seed", c.seed, "PRNG seed")->capture_default_str();

  // sample
  std::uint64_t sample_count = 2500;
  auto* sample_cmd = app.add_subcommand("sample", "uniformly sample distinct state ranks");
  detail::add_env(sample_cmd, c);
  detail::add_io(sample_cmd, c);
  sample_cmd->add_option("--count", sample_count, "number of states")->capture_default_str();
  sample_cmd->add_option("--seed", c.seed, "PRNG seed")->capture_default_str();

  // plan
  std::string instances_file, domain_file, problem_file;
  std::optional<std::size_t> instance_index;
  auto* plan_cmd = app.add_subcommand("plan", "optimal blind search");
  detail::add_env(plan_cmd, c);
  detail::add_io(plan_cmd, c);
  plan_cmd->add_option("--instances", instances_file, "instance file from gen-instances");
  plan_cmd->add_option("--index", instance_index, "plan only this instance");
  plan_cmd->add_option("--init", init_rank, "initial state rank");
  plan_cmd->add_option("--goal", goal_rank, "goal state rank");
  plan_cmd->add_option("--domain", domain_file, "PDDL domain (grounded search)");
  plan_cmd->add_option("--problem", problem_file, "PDDL problem (grounded search)");

  // validate
  std::string plan_file;
  auto* validate_cmd = app.add_subcommand("validate", "check a plan; exit 0 iff valid");
  detail::add_env(validate_cmd, c);
  detail::add_io(validate_cmd, c);
  validate_cmd->add_option("--plan", plan_file, "plan JSON")->required();
  validate_cmd->add_option("--init", init_rank, "override the plan's initial rank");
  validate_cmd->add_option("--goal", goal_rank, "override the plan's goal rank");
  validate_cmd->add_option("--domain", domain_file, "PDDL domain (grounded plans)");
  validate_cmd->add_option("--problem", problem_file, "PDDL problem (grounded plans)");

  // export
  bool with_images = false;
  std::optional<std::uint64_t> jitter_seed;
  unsigned workers = 0;
  std::string catalog_file;
  auto* export_cmd = app.add_subcommand("export", "write the dataset archive");
  detail::add_env(export_cmd, c);
  export_cmd->add_option("--out", c.out, "archive path")->required();
  export_cmd->add_flag("--quiet", c.quiet, "suppress informational output");
  export_cmd->add_option("--shard", shard_index, "shard index");
  export_cmd->add_option("--num-shards", num_shards, "number of shards")->check(CLI::PositiveNumber);
  export_cmd->add_flag("--images", with_images, "store full PPM renders");
  export_cmd->add_option("--jitter-seed", jitter_seed, "enable per-stack jitter with this seed");
  export_cmd->add_option("--workers", workers, "render threads (0 = all cores)");
  export_cmd->add_option("--catalog", catalog_file, "block catalog JSON (default: built-in)");

  // merge
  std::vector<std::string> shard_files;
  auto* merge_cmd = app.add_subcommand("merge", "merge shard archives");
  merge_cmd->add_option("shards", shard_files, "shard archives")->required();
  merge_cmd->add_option("--out", c.out, "merged archive path")->required();
  merge_cmd->add_flag("--quiet", c.quiet, "suppress informational output");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadFlags;
  }

  auto log = [&](const std::string& line) {
    if (!c.quiet) err << line << "\n";
  };

  try {
    if (shard_index >= num_shards) throw detail::FlagError("--shard must be below --num-shards");
    const std::optional<ShardSpec> shard =
        num_shards > 1 ? std::optional<ShardSpec>(ShardSpec{shard_index, num_shards}) : std::nullopt;

    if (*enumerate_cmd) {
      const std::size_t n = c.blocks, k = c.stacks;
      if (count_only) {
        std::uint64_t states = count_states(n, k);
        std::uint64_t transitions = count_transitions(n, k);
        if (shard) {
          states = shard_interval(states, *shard).size();
          transitions = 0;
          enumerate_transitions(n, k, *shard, [&](const Transition&) { ++transitions; });
        }
        detail::emit_output(c, "states=" + std::to_string(states) + " transitions=" + std::to_string(transitions) + "\n",
                            out);
        return kOk;
      }
      std::string rows;
      enumerate_transitions(n, k, shard.value_or(ShardSpec{}), [&](const Transition& t) {
        rows += std::to_string(t.src) + ' ' + std::to_string(action_code(t.action, k)) + ' ' + std::to_string(t.dst) + '\n';
      });
      detail::emit_output(c, rows, out);
      return kOk;
    }

    if (*domain_cmd) {
      detail::emit_output(c, model == "classic4" ? strips::emit_domain_classic4()
                                                 : strips::emit_domain_extended(c.blocks, c.stacks),
                          out);
      return kOk;
    }

    if (*problem_cmd) {
      if (model == "extended") {
        if (!init_rank || !goal_rank) throw detail::FlagError("extended problems need --init and --goal");
        const WorldState init = unrank(*init_rank, c.blocks, c.stacks);
        const WorldState goal = unrank(*goal_rank, c.blocks, c.stacks);
        detail::emit_output(c, strips::emit_problem(init, goal), out);
      } else {
        if (init_state_file.empty() || goal_state_file.empty()) {
          throw detail::FlagError("classic4 problems need --init-state and --goal-state");
        }
        detail::emit_output(c,
                            strips::emit_problem(detail::read_classic_state(init_state_file),
                                                 detail::read_classic_state(goal_state_file)),
                            out);
      }
      return kOk;
    }

    if (*gen_cmd) {
      if (per_step < 1) throw detail::FlagError("--per-step must be at least 1");
      for (auto L : steps) {
        if (L == 0) throw detail::FlagError("--steps entries must be at least 1 (L=0 instances are trivial)");
      }
      InstanceSet set{c.blocks, c.stacks, c.seed, steps, per_step,
                      gen_instances(c.blocks, c.stacks, steps, per_step, c.seed)};
      detail::emit_output(c, to_json(set).dump(2) + "\n", out);
      log("wrote " + std::to_string(set.instances.size()) + " instances");
      return kOk;
    }

    if (*sample_cmd) {
      if (sample_count > count_states(c.blocks, c.stacks)) throw detail::FlagError("--count exceeds the state count");
      const json j = {{"n", c.blocks},
                      {"k", c.stacks},
                      {"seed", c.seed},
                      {"ranks", sample_states(c.blocks, c.stacks, sample_count, c.seed)}};
      detail::emit_output(c, j.dump(2) + "\n", out);
      return kOk;
    }

    if (*plan_cmd) {
      if (!domain_file.empty() || !problem_file.empty()) {
        if (domain_file.empty() || problem_file.empty()) throw detail::FlagError("need both --domain and --problem");
        const auto model_g = strips::ground(strips::parse_domain(detail::read_file(domain_file)),
                                            strips::parse_problem(detail::read_file(problem_file)));
        const GroundedPlan plan = plan_grounded_blind(model_g);
        detail::emit_output(c, to_json(plan).dump(2) + "\n", out);
        log("length=" + std::to_string(plan.steps.size()));
        return kOk;
      }
      if (!instances_file.empty()) {
        const InstanceSet set = instance_set_from_json(detail::read_json_file(instances_file));
        json plans = json::array();
        for (std::size_t i = 0; i < set.instances.size(); ++i) {
          if (instance_index && *instance_index != i) continue;
          const Instance& inst = set.instances[i];
          const Plan plan = plan_optimal(set.n, set.k, inst.init, inst.goal);
          json pj = plan_to_json(set.n, set.k, inst.init, inst.goal, plan);
          pj["L"] = inst.walk_length;
          pj["index"] = i;
          plans.push_back(pj);
          log("instance " + std::to_string(i) + ": L=" + std::to_string(inst.walk_length) +
              " length=" + std::to_string(plan.size()));
        }
        if (instance_index && plans.empty()) throw detail::FlagError("--index out of range");
        const json doc = instance_index ? plans.front() : json{{"plans", plans}};
        detail::emit_output(c, doc.dump(2) + "\n", out);
        return kOk;
      }
      if (!init_rank || !goal_rank) throw detail::FlagError("plan needs --instances, --init/--goal, or --domain/--problem");
      const Plan plan = plan_optimal(c.blocks, c.stacks, *init_rank, *goal_rank);
      detail::emit_output(c, plan_to_json(c.blocks, c.stacks, *init_rank, *goal_rank, plan).dump(2) + "\n", out);
      log("length=" + std::to_string(plan.size()));
      return kOk;
    }

    if (*validate_cmd) {
      const json pj = detail::read_json_file(plan_file);
      ValidationReport report;
      if (pj.value("model", std::string("extended")) == "grounded") {
        if (domain_file.empty() || problem_file.empty()) throw detail::FlagError("grounded plans need --domain and --problem");
        const auto model_g = strips::ground(strips::parse_domain(detail::read_file(domain_file)),
                                            strips::parse_problem(detail::read_file(problem_file)));
        report = validate_grounded(model_g, grounded_plan_from_json(pj));
      } else {
        const std::size_t n = pj.contains("n") && !validate_cmd->count("--blocks") ? pj["n"].get<std::size_t>() : c.blocks;
        const std::size_t k = pj.contains("k") && !validate_cmd->count("--stacks") ? pj["k"].get<std::size_t>() : c.stacks;
        if (!init_rank && pj.contains("init")) init_rank = pj["init"].get<StateRank>();
        if (!goal_rank && pj.contains("goal")) goal_rank = pj["goal"].get<StateRank>();
        if (!init_rank || !goal_rank) throw detail::FlagError("plan file lacks init/goal; pass --init and --goal");
        report = validate(n, k, *init_rank, plan_from_json(pj), *goal_rank);
      }
      detail::emit_output(c, detail::report_line(report) + "\n", out);
      return report.ok ? kOk : kValidationFailed;
    }

    if (*export_cmd) {
      const BlockCatalog catalog =
          catalog_file.empty() ? BlockCatalog::make_default(c.blocks) : catalog_from_json(detail::read_json_file(catalog_file));
      ArchiveOptions opts;
      opts.images = with_images;
      opts.shard = shard;
      opts.jitter_seed = jitter_seed;
      opts.workers = workers;
      const ArchiveManifest m = write_archive(c.out, c.blocks, c.stacks, catalog, opts);
      log("wrote " + c.out + ": states=" + std::to_string(m.state_count) +
          " transitions=" + std::to_string(m.transition_count));
      return kOk;
    }

    if (*merge_cmd) {
      std::vector<std::filesystem::path> paths(shard_files.begin(), shard_files.end());
      const ArchiveManifest m = merge_shards(paths, c.out);
      log("wrote " + c.out + ": states=" + std::to_string(m.state_count) +
          " transitions=" + std::to_string(m.transition_count));
      return kOk;
    }
  } catch (const detail::FlagError& e) {
    err << "error: " << e.what() << "\n";
    return kBadFlags;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kBadFlags;
}

}  // namespace bwgen::cli
