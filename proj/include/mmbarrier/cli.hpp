#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmbarrier {

/// Entry point of the `mmbarrier` command line tool; `args` excludes the
/// program name. Returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Expands `--config FILE` into flags. The file holds `key = value` lines
/// (key = long option name); keys already given on the command line are
/// skipped, so flags override file values. A value of `true` for a key
/// becomes a bare flag, `false` drops it.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

}  // namespace mmbarrier
