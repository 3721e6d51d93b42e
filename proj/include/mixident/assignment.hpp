#pragma once

#include <vector>

namespace mixident {

/// Minimum-cost assignment on a square cost matrix; returns the column chosen
/// for each row. Exhaustive for n <= 6, Hungarian (Jonker-Volgenant style
/// potentials) above.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

double assignment_cost(const std::vector<std::vector<double>>& cost,
                       const std::vector<int>& cols);

}  // namespace mixident
