#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crsing/series.hpp"

namespace crs {

/// Real-analytic hypersurface Im w = phi(z, conj z, Re w) in normal
/// coordinates, with phi given as a truncated series in (z, c, s).
class Hypersurface {
 public:
  explicit Hypersurface(Series phi);

  int n() const noexcept { return phi_.space()->cr_dim(); }
  int trunc() const noexcept { return phi_.trunc(); }
  const Series& phi() const noexcept { return phi_; }
  const SpacePtr& space() const noexcept { return phi_.space(); }

 private:
  Series phi_;
};

struct Violation {
  enum class Kind { NotNormal, NotReal };
  Kind kind;
  /// Offending monomial as a series literal (with its coefficient).
  std::string monomial;
  std::string detail;
};

struct ValidationResult {
  bool normal = true;
  bool real = true;
  std::vector<Violation> violations;
  bool ok() const noexcept { return normal && real; }
};

/// Checks phi(z,0,s) = phi(0,c,s) = 0 and conjugate(phi) = phi.
ValidationResult validate(const Hypersurface& h);
/// Throws ValidationError describing the first violation.
void require_valid(const Hypersurface& h);

struct InfiniteType {
  /// nullopt when phi == 0 (Levi-flat).
  std::optional<int> m;
  /// Coefficient of s^m, a series in (z, c).
  std::optional<Series> phi_m;
  /// Lowest total degree of phi_m.
  std::optional<int> r;
  /// phi / s^m.
  std::optional<Series> psi;

  bool levi_flat() const noexcept { return !m.has_value(); }
  /// m-infinite type 2.
  bool type2() const noexcept { return r.has_value() && *r == 2; }
};

InfiniteType compute_infinite_type(const Hypersurface& h);

struct Essentiality {
  enum class Verdict { CertifiedEssential, NotEssentialUpTo, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  /// Certificate degree d (m^d lies in the coefficient ideal) when certified,
  /// otherwise the degree bound D that was searched.
  int degree = 0;
  /// Coordinate axis (0-based z index) on which every coefficient vanishes,
  /// when that is the obstruction found.
  std::optional<int> obstruction_axis;
  /// Number of coefficient functions a_alpha(z) that are nonzero at truncation.
  int generator_count = 0;
};

std::string to_string(Essentiality::Verdict v);

/// Decides whether the ideal generated by the coefficients a_alpha(z) of
/// psi(z, c, 0) = sum a_alpha(z) c^alpha has finite codimension, by searching
/// for d <= degree_bound with every degree-d monomial in the span of
/// { z^delta a_alpha mod deg > d }; Nakayama's lemma then puts m^d in the
/// ideal.  Throws ValidationError on Levi-flat input.
Essentiality essentiality_check(const Hypersurface& h, int degree_bound);

struct Nondegeneracy {
  /// Least ell with full span, or nullopt (degenerate up to ell_max).
  std::optional<int> ell;
  int ell_max = 0;
  /// Rank of the span after including all |alpha| <= k, for k = 0..checked.
  std::vector<int> span_ranks;
};

/// Largest ell the truncation of h supports (trunc - m - 1).
int max_supported_ell(const Hypersurface& h);

/// Least ell such that the c-derivatives of order <= ell of d(psi)/dz at the
/// origin span C^n.  TruncationError if ell_max exceeds max_supported_ell.
Nondegeneracy nondegeneracy_ell(const Hypersurface& h, int ell_max);

}  // namespace crs
