#ifndef MAXPLUS_CLI_HPP
#define MAXPLUS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace maxplus {

// Runs one invocation, arguments as on the command line (program name
// excluded). Exit codes: 0 success, 1 failed example assertions, 2 config or
// usage errors.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace maxplus

#endif
