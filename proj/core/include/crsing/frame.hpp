#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "crsing/hypersurface.hpp"
#include "crsing/linalg.hpp"
#include "crsing/series.hpp"

namespace crs {

using SeriesMatrix = std::vector<std::vector<Series>>;

/// Vector field with series coefficients in the coordinate basis
/// (d/dz_A, d/dc_A, d/ds), indexed like the variables of its space.
class VectorField {
 public:
  explicit VectorField(std::vector<Series> components);

  static VectorField zero(const SpacePtr& space, int trunc);
  static VectorField coordinate(const SpacePtr& space, int trunc, std::size_t var);

  const std::vector<Series>& components() const noexcept { return comps_; }
  const Series& operator[](std::size_t i) const { return comps_.at(i); }
  const SpacePtr& space() const noexcept { return comps_.front().space(); }

  /// X(f) = sum_j X^j df/dx_j.  A derivation.
  Series apply(const Series& f) const;

  VectorField scaled(const Series& f) const;
  friend VectorField operator+(const VectorField& a, const VectorField& b);

 private:
  std::vector<Series> comps_;
};

/// Coordinate Lie bracket [X, Y]^i = X(Y^i) - Y(X^i).
VectorField bracket(const VectorField& x, const VectorField& y);

/// The frame (T, L_1..L_n, L_1bar..L_nbar) of a hypersurface in normal
/// coordinates with L_Abar = d/dc_A - (i phi_{c_A} / (1 + i phi_s)) d/ds,
/// L_A its conjugate and T = d/ds, together with the dual coframe
/// (theta, theta^A, theta^Abar).  Frame index 0 is T, 1..n are L_A and
/// n+1..2n are L_Abar.
class Frame {
 public:
  Frame(Hypersurface surface, std::vector<VectorField> vectors, SeriesMatrix coframe);

  const Hypersurface& surface() const noexcept { return surface_; }
  const SpacePtr& space() const noexcept { return surface_.space(); }
  int n() const noexcept { return surface_.n(); }
  std::size_t size() const noexcept { return vectors_.size(); }

  const VectorField& vector(std::size_t k) const { return vectors_.at(k); }
  const VectorField& T() const { return vectors_[0]; }
  const VectorField& L(int a) const { return vectors_.at(1 + static_cast<std::size_t>(a)); }
  const VectorField& Lbar(int a) const { return vectors_.at(1 + static_cast<std::size_t>(n() + a)); }
  static std::size_t index_L(int a) { return 1 + static_cast<std::size_t>(a); }
  std::size_t index_Lbar(int a) const { return 1 + static_cast<std::size_t>(n() + a); }

  /// Row k of the coframe: coordinate components of the k-th dual 1-form.
  const std::vector<Series>& coframe_row(std::size_t k) const { return coframe_.at(k); }
  const SeriesMatrix& coframe() const noexcept { return coframe_; }

  /// Components of a vector field in the frame basis.
  std::vector<Series> decompose(const VectorField& v) const;

 private:
  Hypersurface surface_;
  std::vector<VectorField> vectors_;
  SeriesMatrix coframe_;
};

Frame build_frame(const Hypersurface& h);

/// Exact inverse of a square series matrix whose constant part is invertible,
/// by Gauss-Jordan elimination with unit pivots.
SeriesMatrix invert(const SeriesMatrix& m);

/// Frame components of [X, Y].
std::vector<Series> bracket_decompose(const VectorField& x, const VectorField& y, const Frame& frame);

/// 1-form given by its pairings with the frame vectors, in frame order.
struct CoFrameForm {
  std::vector<Series> pairings;

  const Series& on_T() const { return pairings.front(); }
};

/// The characteristic form theta: pairing 1 with T and 0 with every L.
CoFrameForm characteristic_form(const Frame& frame);

/// Lie derivative along X, from <L_X w, Y> = X<w, Y> - <w, [X, Y]>.
CoFrameForm lie_derivative(const CoFrameForm& w, const VectorField& x, const Frame& frame);

/// Levi matrix h[A][B] = (1/2i) <theta, [L_Abar, L_B]>.
SeriesMatrix levi_matrix(const Frame& frame);

/// Word of conjugate letters Abar_1 ... Abar_k (0-based A).
using Word = std::vector<int>;

/// Iterated Lie derivatives L_{A_k} ... L_{A_1} theta for every word up to a
/// given length.  Brackets of each L_Abar with the frame are computed once.
class IteratedForms {
 public:
  explicit IteratedForms(std::shared_ptr<const Frame> frame);

  const Frame& frame() const noexcept { return *frame_; }
  int length() const noexcept { return length_; }

  /// Adds every word of length length()+1.
  void extend();
  void extend_to(int length);

  const CoFrameForm& form(const Word& word) const;
  /// h_{word D} = <form(word), L_D>.
  const Series& h(const Word& word, int d) const;
  /// h_{word} = <form(word), T>.
  const Series& h_T(const Word& word) const;

  /// Lie derivative along L_Cbar using the cached bracket table.
  CoFrameForm derive(const CoFrameForm& w, int c) const;

 private:
  std::shared_ptr<const Frame> frame_;
  std::vector<std::vector<std::vector<Series>>> brackets_;  // [C][k] -> components of [L_Cbar, Y_k]
  std::map<Word, CoFrameForm> forms_;
  int length_ = 0;
};

/// h_{Abar_1..Abar_k D} (tail = D, 0-based) or h_{Abar_1..Abar_k} (tail = nullopt).
Series iterated_h(const Frame& frame, const Word& word, std::optional<int> tail);

/// h_{word Cbar D} - (L_Cbar h_{word D} + h_{word} h_{Cbar D}), each side
/// computed independently from the iterated forms.
Series recursion_residual(const IteratedForms& forms, const Word& word, int c, int d);

struct Desingularized {
  int m = 0;
  SeriesMatrix h0;            ///< h / s^m, Levi normalization
  std::vector<Series> h0_bar; ///< from [L_Abar, s^m T] = -s^m h0_bar T
  std::vector<Series> a_bar;  ///< m (L_Abar s) / s
};

/// InvariantViolation naming the offending monomial when a division by s^m
/// (or by s for a_bar) leaves a remainder.
Desingularized desingularize(const Frame& frame, const SeriesMatrix& h, int m);

/// Degree-(r-2) part of h0|_{s=0} compared with the mixed Hessian
/// d^2 alpha / dc_A dz_B of the lowest-order part alpha of phi_m.
struct LeadingTermCheck {
  bool divisible = false;
  bool nonvanishing_on_E = false;
  bool matches_hessian = false;
  SeriesMatrix hessian;
  SeriesMatrix leading;
};

LeadingTermCheck check_leading_term(const Frame& frame, const SeriesMatrix& h, int m);

struct Filtration {
  /// r_k = n - dim F_k(0) for k = 0..checked.
  std::vector<int> ranks;
  /// Least k with F_k(0) equal to the last computed F.
  int ell = 0;
  /// F_ell(0) = {0}.
  bool nondegenerate = false;
  int ell_max = 0;
  /// Columns are the adapted L'_A(0) in the original basis.
  Matrix basis_change;
  /// Values h0_{Abar_1..Abar_k a'}(0) vanish for k below the level of a'.
  bool lower_levels_vanish = false;
  /// Kernels of the level-k value matrices restricted to F_{k-1} lie in F_k.
  bool kernel_refinement_holds = false;
  /// h0(0) != 0.
  bool type2 = false;
};

/// F_k(0): common kernel of (h0_{Abar_1..Abar_j D}(0))_D over all words with
/// j <= k.  Stops at the first k with F_k(0) = {0}.
Filtration filtration(const Frame& frame, int m, int ell_max);

/// Largest word length the truncation supports for h0 values at the origin.
int max_filtration_length(const Frame& frame, int m);

}  // namespace crs
