#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crsing/errors.hpp"
#include "crsing/frame.hpp"
#include "crsing/hypersurface.hpp"
#include "crsing/series.hpp"

namespace crs {

/// The pushforward of s^m T has no smooth T-component coefficient: the
/// division by (s o f)^{m_hat} failed, or a side is Levi-flat.
class XiSingularError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

/// Holomorphic map germ (z, w) -> (F_1, ..., F_{n+1}) between hypersurfaces of
/// the same CR dimension.  Components live in VarSpace::holomorphic(n).
class HoloMap {
 public:
  HoloMap(std::vector<Series> components, Hypersurface source, Hypersurface target);

  int n() const noexcept { return source_.n(); }
  const std::vector<Series>& components() const noexcept { return comps_; }
  const Hypersurface& source() const noexcept { return source_; }
  const Hypersurface& target() const noexcept { return target_; }

  static HoloMap identity(const Hypersurface& source, int trunc = kExact);

 private:
  std::vector<Series> comps_;
  Hypersurface source_;
  Hypersurface target_;
};

/// F restricted to the source, as series in its (z, c, s) coordinates.
struct RestrictedMap {
  std::vector<Series> z_hat;  ///< F_A(z, s + i phi)
  std::vector<Series> c_hat;  ///< conjugates of z_hat
  Series w_hat;               ///< F_{n+1}(z, s + i phi)
  Series s_hat;               ///< Re w_hat

  /// g o f for a series g in the target (z, c, s) coordinates.
  Series pullback(const Series& g) const;
  /// Target coordinate functions in target-space variable order.
  std::vector<Series> coordinates() const;
};

RestrictedMap restrict_map(const HoloMap& f);

/// Im F_{n+1} - phi_hat(F', conj F', Re F_{n+1}) on the source.
Series maps_into(const HoloMap& f);

struct MapFrameData {
  SeriesMatrix gamma;       ///< gamma[A][B] = gamma^A_B
  std::vector<Series> eta;  ///< eta^A
  Series tau;               ///< T_hat-component of f_* S
  Series xi;                ///< tau / (s_hat)^{m_hat}
  Series s_hat;
  int m = 0;
  int m_hat = 0;
  /// s-adic valuation of s_hat and its unit part s_hat / s^v.
  int s_hat_valuation = 0;
  /// f_* (S, L_B, L_Bbar) is lower triangular in the target frame with the
  /// conjugate blocks matching.
  bool triangular = false;
};

/// XiSingularError when either side is Levi-flat or the division fails.
MapFrameData frame_data(const HoloMap& f);

struct Residual {
  std::string name;
  Series value;
  /// Reported for comparison only; not part of the verdict.
  bool diagnostic = false;
};

struct ResidualReport {
  Series map_residual;
  std::vector<Residual> identities;
  bool xi_smooth = false;
  std::optional<Series> xi;
  std::string certificate;

  /// map_residual and every non-diagnostic residual vanish.
  bool all_zero() const;
};

/// Residuals of the pushforward identities, written with
/// g0 = <theta, [L_Abar, L_B]> / s^m and h0_Abar from [L_Abar, S] = -h0_Abar S:
///   levi_transfer       xi g0_{AB} - conj(gamma^C_A) gamma^D_B g0hat_{CD}
///   xi_transport        L_Abar xi + xi h0_Abar - xi conj(gamma^C_A) h0hat_Cbar
///                         + conj(gamma^C_A) eta^D g0hat_{CD}
///   gamma_transport     L_Abar gamma^E_B - eta^E g0_{AB}
///   eta_transport       L_Abar eta^E + eta^E h0_Abar
///   s_gamma_commutator  S gamma^E_A - L_A eta^E - eta^E conj(h0_Abar)
/// xi_transport_alt and gamma_transport_alt carry the opposite sign on the
/// eta terms and are diagnostics.  A XiSingularError is caught and reported
/// through xi_smooth = false.
ResidualReport check_identities(const HoloMap& f);

/// outer o inner; requires inner.target() and outer.source() to agree.
HoloMap compose(const HoloMap& outer, const HoloMap& inner);

/// Im w = Re w * h_k(z, conj z): h_k = sum b_j u^{k-j} / (1 + sum a_j u^{k-j})
/// with u = z c and a_j, b_j the coefficients of s^j t^{k-j} in Re and Im of
/// (s + i t)^k.  n = 1.
Hypersurface power_map_target(int k, int trunc);

}  // namespace crs
