#pragma once

namespace ratos {

/// Scenario runner behind the ratos-sim binary. Exposed as a function so
/// tests can drive it in-process. Exit codes: 0 success, 2 validation
/// failure (bad arguments, unreadable or invalid config), 3 numerical
/// failure (NaN, CFL violation, norm-drift abort).
int run_cli(int argc, const char* const* argv);

}  // namespace ratos
