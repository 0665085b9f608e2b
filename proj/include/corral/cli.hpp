#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace corral {

// `corral <group> <command> [files] [--json] [--tol <x>] [--bound <n>]`.
// `args` excludes the program name.  Exit status: 0 ok, 1 domain error,
// 2 parse or usage error, 3 bound exceeded or an unknown result.
auto run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) -> int;

}  // namespace corral
