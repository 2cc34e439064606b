#pragma once

#include <map>
#include <utility>
#include <vector>

#include "crsing/linalg.hpp"
#include "crsing/series.hpp"

namespace crs {

/// t dy/dt = f(t, y) with f(0, 0) = 0.  Each f_j is a series in
/// VarSpace::briot_bouquet(N), i.e. in (t, y1..yN).
class BBSystem {
 public:
  BBSystem(std::vector<Series> f, int order);

  int dim() const noexcept { return static_cast<int>(f_.size()); }
  int order() const noexcept { return order_; }
  const std::vector<Series>& f() const noexcept { return f_; }
  const SpacePtr& space() const noexcept { return f_.front().space(); }

 private:
  std::vector<Series> f_;
  int order_;
};

struct LinearPart {
  Vector p;  ///< coefficient of t
  Matrix a;  ///< coefficient of y
  /// det(x I - A), lowest degree first.
  std::vector<GaussRational> char_poly;
};

LinearPart linear_part(const BBSystem& sys);

struct Resonance {
  int k = 0;
  int kernel_dim = 0;
};

/// Positive integers k <= max_k with det(k I - A) = 0.
std::vector<Resonance> resonances(const LinearPart& lp, int max_k);

struct FormalLogSolution {
  /// (k, r) -> coefficient vector of t^k (ln t)^r, nonzero entries only.
  std::map<std::pair<int, int>, Vector> coeffs;
  std::vector<Resonance> resonances;
  /// Number of free parameters met in the log-graded solves (all set to 0).
  int family_dim = 0;
  int order = 0;
  /// t y' - f(t, y) vanishes through t^order.
  bool residual_zero = false;

  bool has_logs() const;
  Vector coefficient(int k, int r = 0) const;
};

/// Solves (k I - A) c_k(L) + c_k'(L) = [t^k] f(t, y_{<k}) for polynomials
/// c_k in L = ln t, k = 1..order, free parameters set to zero.
FormalLogSolution formal_solve(const BBSystem& sys);

/// Residual of t y' - f(t, y) through t^order, keyed like the solution.
std::map<std::pair<int, int>, Vector> residual(const BBSystem& sys, const FormalLogSolution& sol);

struct DulacReport {
  int p = 0;
  int nonpositive_real = 0;  ///< eigenvalues in (-inf, 0], with multiplicity
  int positive_real = 0;
  int nonreal = 0;
};

/// Counts eigenvalues of A off the closed negative real axis with Sturm
/// sequences on gcd(Re P, Im P), P the characteristic polynomial.
DulacReport dulac_classify(const LinearPart& lp);

struct OracleResult {
  double max_deviation = 0;
  double t_min = 0;
  double t_max = 0;
};

/// Integrates y' = f(t, y) / t with a fixed-step Runge-Kutta scheme from
/// +-|t0| out to +-t_end, starting on the series, and reports the largest
/// componentwise distance to the truncated series at the step points.
/// ValidationError when the solution carries log terms.
OracleResult numeric_oracle(const BBSystem& sys, const FormalLogSolution& sol, double t0, double t_end = 0.1,
                            int steps = 2000);

}  // namespace crs
