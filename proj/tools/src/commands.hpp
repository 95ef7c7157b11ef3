#pragma once

#include "run_config.hpp"

namespace l0recov::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitVerifyFailed = 3,
};

int cmd_bench(const RunConfig& config);
int cmd_phantom(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_solve(const RunConfig& config);
int cmd_gen(const RunConfig& config);

}  // namespace l0recov::cli
