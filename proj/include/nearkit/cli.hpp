#pragma once

#include <exception>

namespace nearkit::cli {

enum ExitCode : int {
  kOk = 0,
  kNumeric = 1,
  kCapability = 2,
  kInput = 3,  // I/O, parse and domain errors
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// nearkit solve|recover-bench|sysid|cfar|example-mirsky|prox --config <json> [--seed N] [--out DIR]
int run(int argc, char** argv);

}  // namespace nearkit::cli
