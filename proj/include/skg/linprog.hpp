#pragma once

#include <Eigen/Dense>

namespace skg {

struct FeasibilityResult {
  bool feasible = false;
  Eigen::VectorXd x;           // basic solution found by phase 1
  double infeasibility = 0.0;  // optimal sum of artificial variables
  int pivots = 0;
};

// Phase-1 simplex for {x >= 0 : A x = b}. Bland's rule, dense tableau.
// Feasible when the artificial sum reaches <= tol.
FeasibilityResult find_feasible_point(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      double tol = 1e-9);

}  // namespace skg
