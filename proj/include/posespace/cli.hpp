#pragma once

#include "posespace/errors.hpp"
#include "posespace/object_model.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace posespace {

/// Process exit codes.
enum ExitCode : int
{
  kExitOk = 0,
  kExitInput = 2,
  kExitSymmetryMismatch = 3,
  kExitEmpty = 4,
  kExitNumerical = 5,
};

int
exit_code_for(ErrorKind kind);

/// `none | spherical | revolution | revolution-rotoreflection |
/// finite:<quaternion file> | cyclic:<n> | dihedral:<n> | octahedral |
/// circular2d | none2d | cyclic2d:<n>`. Finite groups are given by
/// generators or full element lists, in mesh coordinates.
Symmetry
parse_symmetry_spec(const std::string& spec, const std::optional<Vec3>& axis);

/// Runs one command. `args` excludes the program name.
int
run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace posespace
