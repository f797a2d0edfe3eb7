#pragma once

namespace namedis::cli {

// Entry point of the `namedis` executable. Returns 0 on success, 1 for
// validation errors (bad files, parameters or usage) and 2 for violated
// internal invariants.
int run(int argc, const char* const* argv);

}  // namespace namedis::cli
