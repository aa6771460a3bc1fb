#pragma once

namespace heatlab::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kNumeric = 3 };

/// Entry point of the heatlab command line tool.
int run(int argc, char** argv);

}  // namespace heatlab::cli
