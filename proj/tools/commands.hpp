#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpsh/io.hpp"

namespace qpsh::cli {

struct RunContext {
  io::Json config = io::Json::object();
  std::uint64_t seed = 1;
  int threads = 1;
};

/// CSV table plus a JSON summary; `pass` is false when an invariant failed.
struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  io::Json summary = io::Json::object();
  bool pass = true;

  void row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
  std::string csv() const;
};

using CommandFn = Report (*)(const RunContext&);

struct Command {
  std::string name;
  std::string help;
  CommandFn run;
  /// Config used by --selftest: the module's invariant suite at small size.
  io::Json selftest_config;
};

const std::vector<Command>& commands();

}  // namespace qpsh::cli
