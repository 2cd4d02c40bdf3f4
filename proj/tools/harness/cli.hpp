#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "harness/commands.hpp"

namespace planloop::harness {

struct Invocation {
  std::string command;
  RunConfig config;
  std::size_t per_category = 20;  // make-suite
  std::size_t count = 20;         // make-dataset
};

/// Parses argv into an Invocation. Values from --config are overridden by
/// flags on the command line. Throws CLI::ParseError (including help).
Invocation parse_cli(const std::vector<std::string>& args);

/// Full entry point: parse, dispatch, map errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace planloop::harness
