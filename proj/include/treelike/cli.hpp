#pragma once

// Command-line front end. run_cli parses argv, dispatches to one of the
// analysis subcommands, and returns the process exit code.
//   0: the analysis reached a conclusive answer, whatever that answer is.
//   1: usage or runtime error.
//   2: a budget or truncation left the analysis inconclusive.

namespace treelike {

int run_cli(int argc, const char* const* argv);

}  // namespace treelike
