#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace clusterkit {

// Executes one batch invocation (args exclude the program name). Results go
// to `out` (JSON or tables per --format), diagnostics to `err`. Output is
// byte-identical across runs with the same arguments and environment.
// Exit codes: 0 success, 1 a verification suite failed, 2 usage or input
// error, 3 broken internal invariant.
int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace clusterkit
