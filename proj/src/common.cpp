#include "bmbem/common.hpp"

namespace bmbem {

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::hard ? "hard" : "soft"; }

BoundaryCondition parse_boundary_condition(const std::string& s) {
    if (s == "hard") return BoundaryCondition::hard;
    if (s == "soft") return BoundaryCondition::soft;
    throw std::invalid_argument("unknown boundary condition '" + s + "' (expected hard|soft)");
}

}  // namespace bmbem
