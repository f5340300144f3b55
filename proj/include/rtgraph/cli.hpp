#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rtgraph::cli {

/// Entry point behind the `rtgraph` executable. `args` excludes the program
/// name. Subcommands: simulate, sweep, replay, estimate, analyze, verify,
/// ingest. Returns the process exit status; files written by a failing
/// command are removed.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rtgraph::cli
