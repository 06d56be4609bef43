// Command-line driver for workbench files.
//
//   fch check <file>
//   fch run <file> [--task NAME] [--max-degree N] [--seed S] [--format text|json]
//   fch verify-paper <file> --suite NAME --seed S [--format text|json]
//
// Exit status: 0 when every task passes, 1 when a task fails, 2 on input errors.

#include "fch/workbench.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// nullopt after printing diagnostics
std::optional<fch::wb::Workbench> load(const std::string& path) {
  auto text = slurp(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  auto w = fch::wb::Workbench::load(*text);
  if (!w.ok()) {
    for (const auto& d : w.diagnostics()) std::cerr << path << ":" << d.str() << "\n";
    return std::nullopt;
  }
  return w;
}

int emit(const fch::wb::Report& r, const std::string& format) {
  std::cout << (format == "json" ? fch::wb::emit_json(r) : fch::wb::emit_text(r));
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite diagram homology workbench"};
  app.require_subcommand(1);

  std::string file, format = "text", task, suite;
  std::size_t max_degree = 0;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "parse and validate a workbench file");
  check->add_option("file", file)->required();

  auto* run = app.add_subcommand("run", "run the tasks of a workbench file");
  run->add_option("file", file)->required();
  auto* task_opt = run->add_option("--task", task, "run only this task");
  auto* deg_opt = run->add_option("--max-degree", max_degree, "degree bound for every task")->check(CLI::Range(0, 8));
  auto* seed_opt = run->add_option("--seed", seed, "seed for verify tasks");
  run->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* verify = app.add_subcommand("verify-paper", "run one property battery");
  verify->add_option("file", file)->required();
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember(fch::suite_names()));
  verify->add_option("--seed", seed)->required();
  verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  auto w = load(file);
  if (!w) return 2;
  if (*check) {
    std::cout << file << ": ok, " << w->declaration_count() << " declarations, " << w->task_names().size()
              << " tasks\n";
    return 0;
  }
  if (*verify) return emit(w->verify(suite, seed), format);

  fch::wb::RunOptions opt;
  if (*task_opt) opt.task = task;
  if (*deg_opt) opt.max_degree = max_degree;
  if (*seed_opt) opt.seed = seed;
  return emit(w->run(opt), format);
}
