#pragma once

#include <cstdint>
#include <vector>

#include "skg/compound_source.hpp"

namespace skg {

struct EstimatorResult {
  int estimated_class = 0;
  std::vector<double> log_likelihoods;  // log2 P^n(x) per class; -inf when impossible
};

// Maximum-likelihood class of x^n over the class marginals. Ties go to the
// lowest class index. Throws NoAdmissibleClass when every class has -inf.
EstimatorResult estimate_marginal(SeqView x, const std::vector<MarginalClass>& classes);

struct ErrorCurvePoint {
  int n = 0;
  long trials = 0;
  long errors = 0;
  double rate = 0.0;
};

struct ErrorCurve {
  int true_class = 0;
  std::vector<ErrorCurvePoint> points;
  // Least-squares fit of ln(rate) against n over points with rate > 0.
  double slope = 0.0;
  double intercept = 0.0;
  int fitted_points = 0;
};

// X^n drawn i.i.d. from the marginal of class `true_class`; a trial errs when
// the estimate differs from it.
ErrorCurve estimate_error_curve(const CompoundSource& src, int true_class,
                                const std::vector<int>& n_list, long trials, std::uint64_t seed);

}  // namespace skg
