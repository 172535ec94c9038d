#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "commands.hpp"
#include "qpsh/errors.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kPrecondition = 3, kNonConvergence = 4, kInvariant = 5 };

}  // namespace

int main(int argc, char** argv) {
  using namespace qpsh;
  CLI::App app{"Quaternionic plurisubharmonic functions: experiments and checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  std::uint64_t seed = 1;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool selftest = false;
  app.add_option("--config", config_path, "JSON config for the subcommand")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "seed for all sampling");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "CSV output (summary goes to <out>.json); stdout if absent");
  app.add_flag("--selftest", selftest, "run the module's invariant suite");

  std::vector<std::pair<CLI::App*, const cli::Command*>> subs;
  for (const auto& cmd : cli::commands()) subs.emplace_back(app.add_subcommand(cmd.name, cmd.help), &cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  const cli::Command* cmd = nullptr;
  for (const auto& [sub, c] : subs)
    if (sub->parsed()) cmd = c;

  cli::Report report;
  cli::RunContext ctx;
  ctx.seed = seed;
  ctx.threads = threads;
  try {
    if (selftest)
      ctx.config = cmd->selftest_config;
    else if (!config_path.empty())
      ctx.config = io::read_file(config_path);
    report = cmd->run(ctx);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const io::Json::exception& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }

  io::Json summary = {{"command", cmd->name}, {"seed", seed},         {"selftest", selftest},
                      {"config", ctx.config}, {"pass", report.pass}, {"results", report.summary}};
  if (out_path.empty()) {
    std::cout << report.csv();
    std::cerr << summary.dump(2) << '\n';
  } else {
    std::ofstream(out_path) << report.csv();
    std::ofstream(out_path + ".json") << summary.dump(2) << '\n';
  }
  if (!report.pass) std::cerr << cmd->name << ": invariant check failed\n";
  return report.pass ? kOk : kInvariant;
}
