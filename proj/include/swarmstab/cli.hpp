#ifndef SWARMSTAB_CLI_HPP
#define SWARMSTAB_CLI_HPP

#include <iosfwd>

namespace swarmstab {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_runtime_error = 2;

/// Entry point of the swarmstab command line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swarmstab

#endif  // SWARMSTAB_CLI_HPP
