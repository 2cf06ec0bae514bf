#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contagion {

/// Runs one command. `args` excludes the program name. Returns 0 on
/// success, 1 on validation errors or bad usage, 2 on runtime errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

} // namespace contagion
