#include "skg/estimation.hpp"

#include <cmath>
#include <limits>

#include "skg/rng.hpp"

namespace skg {

EstimatorResult estimate_marginal(SeqView x, const std::vector<MarginalClass>& classes) {
  if (classes.empty()) throw SpecError("estimate_marginal: no classes");
  const int ax = classes[0].x_marginal.size();
  const Eigen::VectorXi counts = type_counts(x, ax);
  EstimatorResult r;
  r.log_likelihoods.resize(classes.size());
  int best = -1;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const Pmf& p = classes[c].x_marginal;
    double ll = 0.0;
    for (int a = 0; a < ax; ++a) {
      if (counts(a) == 0) continue;
      if (p(a) <= 0.0) {
        ll = -std::numeric_limits<double>::infinity();
        break;
      }
      ll += counts(a) * std::log2(p(a));
    }
    r.log_likelihoods[c] = ll;
    if (std::isfinite(ll) && (best < 0 || ll > r.log_likelihoods[best])) best = static_cast<int>(c);
  }
  if (best < 0) throw NoAdmissibleClass();
  r.estimated_class = best;
  return r;
}

ErrorCurve estimate_error_curve(const CompoundSource& src, int true_class,
                                const std::vector<int>& n_list, long trials, std::uint64_t seed) {
  const auto classes = marginal_partition(src);
  if (true_class < 0 || true_class >= static_cast<int>(classes.size()))
    throw SpecError("estimate_error_curve: class out of range");
  if (trials < 1) throw DomainError("estimate_error_curve: trials must be positive");
  CategoricalSampler draw(classes[true_class].x_marginal.mass());
  ErrorCurve curve;
  curve.true_class = true_class;
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    const int n = n_list[k];
    if (n < 1) throw DomainError("estimate_error_curve: n must be positive");
    Rng rng(derive_seed(seed, k, StreamTag::kEstimation));
    Sequence x(n);
    ErrorCurvePoint pt;
    pt.n = n;
    pt.trials = trials;
    for (long t = 0; t < trials; ++t) {
      for (int i = 0; i < n; ++i) x[i] = static_cast<Symbol>(draw(rng));
      if (estimate_marginal(x, classes).estimated_class != true_class) ++pt.errors;
    }
    pt.rate = static_cast<double>(pt.errors) / static_cast<double>(trials);
    curve.points.push_back(pt);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& p : curve.points) {
    if (p.errors == 0) continue;
    const double y = std::log(p.rate);
    sx += p.n;
    sy += y;
    sxx += static_cast<double>(p.n) * p.n;
    sxy += p.n * y;
    ++m;
  }
  curve.fitted_points = m;
  if (m >= 2) {
    curve.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    curve.intercept = (sy - curve.slope * sx) / m;
  }
  return curve;
}

}  // namespace skg
