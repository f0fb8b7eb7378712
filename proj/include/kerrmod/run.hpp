#pragma once

#include "kerrmod/config.hpp"

namespace kerrmod {

struct RunOptions {
    unsigned workers = 1;  // 0 = hardware concurrency
    bool quiet = false;    // suppress stderr progress
};

/// Executes the spec, writing manifest.json and the command's outputs
/// under spec.out_dir (created if needed). Returns the process exit code:
/// 0 on success, 3 when an oracle check ran to completion but failed.
/// Module errors propagate as exceptions; the CLI records them.
int run_spec(const RunSpec& spec, const RunOptions& opt = {});

} // namespace kerrmod
