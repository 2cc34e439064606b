#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crsing/briot_bouquet.hpp"
#include "crsing/series.hpp"

namespace crs {

/// Multi-index slot (alpha, p) of u^{alpha,p} = (s d/ds)^p d_x^alpha u.
struct JetSlot {
  std::vector<int> alpha;
  int p = 0;

  int order() const;
  friend bool operator==(const JetSlot&, const JetSlot&) = default;
};

struct JetVariable {
  int component = 0;  ///< 0-based i
  JetSlot slot;
  std::string name;   ///< u<i>_<a1>_..._<a2n>_<p>, 1-based i
};

/// Which slots get a closure equation.
///  TopOrder: every slot with |alpha| + p = k.
///  PureS:    only (0, k); mixed top slots use the x-transported contact
///            relation (s d/ds) u^{alpha,p} = d_{x_j} u^{alpha - e_j, p + 1}.
enum class SlotPolicy { TopOrder, PureS };

std::string to_string(SlotPolicy p);
std::optional<SlotPolicy> slot_policy_from_string(const std::string& s);

struct ContactEquation {
  enum class Kind { Chain, XTransport };
  Kind kind = Kind::Chain;
  int lhs = 0;          ///< variable index
  int rhs = 0;          ///< variable index
  int x_direction = -1; ///< j for XTransport
};

class JetSpace {
 public:
  JetSpace(int n, int k, int components, SlotPolicy policy);

  int n() const noexcept { return n_; }
  int base_dim() const noexcept { return 2 * n_; }
  int k() const noexcept { return k_; }
  int components() const noexcept { return components_; }
  SlotPolicy policy() const noexcept { return policy_; }

  const std::vector<JetSlot>& slots() const noexcept { return slots_; }
  const std::vector<JetVariable>& variables() const noexcept { return vars_; }
  const std::vector<ContactEquation>& contact() const noexcept { return contact_; }
  /// Variable indices that need a closure equation.
  const std::vector<int>& closure_slots() const noexcept { return closure_; }

  std::optional<int> index_of(int component, const JetSlot& slot) const;
  /// Space (s, u..., x1..x2n) in which closure series are written.
  const SpacePtr& closure_space() const noexcept { return closure_space_; }

 private:
  int n_, k_, components_;
  SlotPolicy policy_;
  std::vector<JetSlot> slots_;
  std::vector<JetVariable> vars_;
  std::vector<ContactEquation> contact_;
  std::vector<int> closure_;
  SpacePtr closure_space_;
};

/// Slots with |alpha| + p <= k in graded order (by |alpha| + p, then
/// lexicographically decreasing in (alpha, p)), components innermost.
/// components < 0 selects 2n + 1.  The default policy closes only (0, k).
JetSpace contact_prolong(int n, int k, SlotPolicy policy = SlotPolicy::PureS, int components = -1);

struct ProlongedSystem {
  JetSpace jets;
  /// One closure series per entry of jets.closure_slots(), same order.
  std::vector<Series> closure;
  /// Frozen base points, each of length 2n.
  std::vector<std::vector<GaussRational>> samples;
  /// U(x, 0) subtracted before solving; empty means 0.
  std::vector<GaussRational> base;
  int order = 8;
};

struct SampleSolution {
  std::vector<GaussRational> x;
  FormalLogSolution solution;
  /// Largest coefficient modulus at each power s^j, j = 1..order.
  std::vector<double> coefficient_norms;
  /// min over the upper half of j of |c_j|^{-1/j}; absent when those vanish.
  std::optional<double> radius_proxy;
};

struct ProlongationResult {
  /// Variable indices solved for (all of them, or the pure-s chain).
  std::vector<int> solved;
  std::vector<SampleSolution> samples;
};

/// Freezes x at each sample, centers at the base values, and solves the
/// resulting Briot-Bouquet system in t = s.  Under SlotPolicy::PureS only the
/// chain u_i^{0,p} is solved and its closure may not involve other slots.
ProlongationResult assemble_and_solve(const ProlongedSystem& ps);

}  // namespace crs
