#pragma once

#include <string>
#include <vector>

#include "corona/group.hpp"

namespace corona::catalog {

/// Z/m with its m characters.
FiniteGroup cyclic(int m);
/// S3 (order 6): trivial, sign and the 2-dim standard representation.
FiniteGroup symmetric3();
/// D4 (order 8): four characters and the 2-dim rotation representation.
FiniteGroup dihedral4();
/// Q8 (order 8): four characters and the 2-dim quaternion representation.
FiniteGroup quaternion8();

/// "S3", "D4", "Q8" or "Z/m".
FiniteGroup by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace corona::catalog
