#include "skg/linprog.hpp"

#include <vector>

#include "skg/errors.hpp"

namespace skg {

FeasibilityResult find_feasible_point(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                      double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m) throw SpecError("find_feasible_point: dimension mismatch");

  // Columns: n structural, m artificial, then the right-hand side.
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (Eigen::Index r = 0; r < m; ++r) {
    const double sign = b(r) < 0.0 ? -1.0 : 1.0;
    t.row(r).head(n) = sign * a.row(r);
    t(r, n + r) = 1.0;
    t(r, n + m) = sign * b(r);
  }
  // Reduced-cost row for min sum(artificials), stored negated.
  for (Eigen::Index r = 0; r < m; ++r) t.row(m) -= t.row(r);
  for (Eigen::Index r = 0; r < m; ++r) t(m, n + r) = 0.0;

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index r = 0; r < m; ++r) basis[r] = n + r;

  constexpr double kEps = 1e-12;
  FeasibilityResult res;
  const int max_pivots = 50 * static_cast<int>(n + m) + 1000;
  while (res.pivots < max_pivots) {
    Eigen::Index enter = -1;
    for (Eigen::Index c = 0; c < n + m; ++c)
      if (t(m, c) < -kEps) {
        enter = c;
        break;
      }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (t(r, enter) <= kEps) continue;
      const double ratio = t(r, n + m) / t(r, enter);
      if (leave < 0 || ratio < best - kEps ||
          (ratio <= best + kEps && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) break;  // unbounded direction cannot occur in phase 1

    t.row(leave) /= t(leave, enter);
    for (Eigen::Index r = 0; r <= m; ++r)
      if (r != leave && t(r, enter) != 0.0) t.row(r) -= t(r, enter) * t.row(leave);
    basis[leave] = enter;
    ++res.pivots;
  }

  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < m; ++r)
    if (basis[r] < n) res.x(basis[r]) = std::max(0.0, t(r, n + m));
  res.infeasibility = std::max(0.0, -t(m, n + m));
  res.feasible = res.infeasibility <= tol;
  return res;
}

}  // namespace skg
