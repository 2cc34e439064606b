#include "crsing/prolongation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crsing/errors.hpp"

namespace crs {

int JetSlot::order() const { return std::accumulate(alpha.begin(), alpha.end(), 0) + p; }

std::string to_string(SlotPolicy p) { return p == SlotPolicy::TopOrder ? "top-order" : "pure-s"; }

std::optional<SlotPolicy> slot_policy_from_string(const std::string& s) {
  if (s == "top-order" || s == "top") return SlotPolicy::TopOrder;
  if (s == "pure-s" || s == "pure") return SlotPolicy::PureS;
  return std::nullopt;
}

namespace {

// All tuples of length len with entries summing to d, lexicographically decreasing.
void compositions(int len, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len - 1) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = d; v >= 0; --v) {
    cur.push_back(v);
    compositions(len, d - v, cur, out);
    cur.pop_back();
  }
}

std::string var_name(int component, const JetSlot& s) {
  std::string name = "u" + std::to_string(component + 1);
  for (int a : s.alpha) name += "_" + std::to_string(a);
  name += "_" + std::to_string(s.p);
  return name;
}

}  // namespace

JetSpace::JetSpace(int n, int k, int components, SlotPolicy policy)
    : n_(n), k_(k), components_(components), policy_(policy) {
  if (n < 1) throw ValidationError("jet space needs n >= 1");
  if (k < 0) throw ValidationError("prolongation order must be >= 0");
  if (components < 1) throw ValidationError("jet space needs at least one component");
  const int dim = 2 * n;
  for (int d = 0; d <= k; ++d) {
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    compositions(dim + 1, d, cur, tuples);
    for (auto& t : tuples) {
      JetSlot slot{std::vector<int>(t.begin(), t.end() - 1), t.back()};
      slots_.push_back(std::move(slot));
    }
  }
  for (const auto& slot : slots_)
    for (int i = 0; i < components; ++i) vars_.push_back({i, slot, var_name(i, slot)});

  for (std::size_t v = 0; v < vars_.size(); ++v) {
    const auto& jv = vars_[v];
    const int ord = jv.slot.order();
    if (ord < k) {
      JetSlot next = jv.slot;
      ++next.p;
      contact_.push_back({ContactEquation::Kind::Chain, static_cast<int>(v), *index_of(jv.component, next), -1});
      continue;
    }
    const bool pure = std::all_of(jv.slot.alpha.begin(), jv.slot.alpha.end(), [](int a) { return a == 0; });
    if (policy == SlotPolicy::TopOrder || pure) {
      closure_.push_back(static_cast<int>(v));
      continue;
    }
    // first nonzero direction j: (s d/ds) u^{alpha,p} = d_{x_j} u^{alpha - e_j, p + 1}
    int j = 0;
    while (jv.slot.alpha[j] == 0) ++j;
    JetSlot src = jv.slot;
    --src.alpha[j];
    ++src.p;
    contact_.push_back({ContactEquation::Kind::XTransport, static_cast<int>(v), *index_of(jv.component, src), j});
  }

  std::vector<std::string> names{"s"};
  for (const auto& jv : vars_) names.push_back(jv.name);
  for (int j = 1; j <= dim; ++j) names.push_back("x" + std::to_string(j));
  closure_space_ = VarSpace::make(std::move(names));
}

std::optional<int> JetSpace::index_of(int component, const JetSlot& slot) const {
  if (component < 0 || component >= components_) return std::nullopt;
  auto it = std::find(slots_.begin(), slots_.end(), slot);
  if (it == slots_.end()) return std::nullopt;
  return static_cast<int>(it - slots_.begin()) * components_ + component;
}

JetSpace contact_prolong(int n, int k, SlotPolicy policy, int components) {
  return JetSpace(n, k, components < 0 ? 2 * n + 1 : components, policy);
}

namespace {

// Replaces y_j by y_j + base_j in an exact series.
Series shift(const Series& a, const std::vector<GaussRational>& base) {
  const auto& sp = a.space();
  std::vector<Series> shifted;
  shifted.reserve(sp->size());
  shifted.push_back(Series::variable(sp, kExact, 0));
  for (std::size_t j = 1; j < sp->size(); ++j)
    shifted.push_back(Series::variable(sp, kExact, j) + Series::constant(sp, kExact, base[j - 1]));
  Series out(sp, a.trunc());
  for (const auto& [e, c] : a.terms()) {
    Series term = Series::constant(sp, kExact, c);
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] != 0) term = term * pow(shifted[j], e[j]);
    out += term;
  }
  return out;
}

double modulus(const GaussRational& q) { return std::abs(q.to_complex()); }

}  // namespace

ProlongationResult assemble_and_solve(const ProlongedSystem& ps) {
  const JetSpace& js = ps.jets;
  const auto& vars = js.variables();
  const auto& closure_idx = js.closure_slots();
  const int nvars = static_cast<int>(vars.size());
  const int dim = js.base_dim();
  const auto& cspace = js.closure_space();

  if (ps.closure.size() != closure_idx.size())
    throw ShapeError("expected " + std::to_string(closure_idx.size()) + " closure series, got " +
                     std::to_string(ps.closure.size()));
  for (const auto& r : ps.closure)
    if (!(*r.space() == *cspace)) throw ShapeError("closure series must live in the jet closure space");
  if (!ps.base.empty() && static_cast<int>(ps.base.size()) != nvars)
    throw ShapeError("base must list one value per jet variable");
  if (ps.samples.empty()) throw ValidationError("at least one sample point is required");
  for (const auto& x : ps.samples)
    if (static_cast<int>(x.size()) != dim) throw ShapeError("sample points need 2n coordinates");
  if (ps.order < 1) throw ValidationError("solve order must be >= 1");

  ProlongationResult result;
  if (js.policy() == SlotPolicy::TopOrder) {
    result.solved.resize(nvars);
    std::iota(result.solved.begin(), result.solved.end(), 0);
  } else {
    for (int v = 0; v < nvars; ++v) {
      const auto& a = vars[v].slot.alpha;
      if (std::all_of(a.begin(), a.end(), [](int x) { return x == 0; })) result.solved.push_back(v);
    }
  }
  std::vector<int> position(nvars, -1);
  for (std::size_t i = 0; i < result.solved.size(); ++i) position[result.solved[i]] = static_cast<int>(i);

  for (std::size_t c = 0; c < ps.closure.size(); ++c) {
    const auto& r = ps.closure[c];
    for (int v = 0; v < nvars; ++v) {
      if (position[v] >= 0) continue;
      const auto var = static_cast<std::size_t>(v + 1);
      if (std::any_of(r.terms().begin(), r.terms().end(), [&](const auto& t) { return t.first[var] > 0; }))
        throw ValidationError("closure for " + vars[closure_idx[c]].name + " involves " + vars[v].name +
                              ", which the pure-s chain does not carry");
    }
  }

  std::vector<GaussRational> base;
  bool shifted = false;
  for (int v : result.solved) {
    base.push_back(ps.base.empty() ? GaussRational() : ps.base[v]);
    shifted = shifted || !base.back().is_zero();
  }
  if (shifted)
    for (const auto& r : ps.closure)
      if (!r.is_exact()) throw ValidationError("centering at a nonzero base needs exact closure series");

  std::vector<std::string> sub_names{"s"};
  for (int v : result.solved) sub_names.push_back(vars[v].name);
  const auto sub_space = VarSpace::make(sub_names);
  const int nsub = static_cast<int>(result.solved.size());
  const auto bb_space = VarSpace::briot_bouquet(nsub);

  for (const auto& x : ps.samples) {
    std::map<std::size_t, GaussRational> values;
    for (int j = 0; j < dim; ++j) values[static_cast<std::size_t>(1 + nvars + j)] = x[j];
    for (int v = 0; v < nvars; ++v)
      if (position[v] < 0) values[static_cast<std::size_t>(v + 1)] = GaussRational();

    std::vector<Series> rhs(nsub, Series(bb_space, kExact));
    for (std::size_t c = 0; c < ps.closure.size(); ++c) {
      Series r = specialize(ps.closure[c], values, sub_space);
      if (shifted) r = shift(r, base);
      rhs[position[closure_idx[c]]] = r.with_space(bb_space);
    }
    for (const auto& ce : js.contact()) {
      if (ce.kind != ContactEquation::Kind::Chain || position[ce.lhs] < 0) continue;
      const int q = position[ce.rhs];
      rhs[position[ce.lhs]] = Series::variable(bb_space, kExact, static_cast<std::size_t>(q + 1)) +
                              Series::constant(bb_space, kExact, base[q]);
    }

    BBSystem sys(std::move(rhs), ps.order);
    SampleSolution out{x, formal_solve(sys), {}, std::nullopt};
    out.coefficient_norms.assign(ps.order, 0.0);
    for (const auto& [key, vec] : out.solution.coeffs) {
      if (key.first < 1 || key.first > ps.order) continue;
      for (const auto& q : vec)
        out.coefficient_norms[key.first - 1] = std::max(out.coefficient_norms[key.first - 1], modulus(q));
    }
    for (int j = (ps.order + 1) / 2; j <= ps.order; ++j) {
      const double cj = out.coefficient_norms[j - 1];
      if (cj <= 0) continue;
      const double r = std::pow(cj, -1.0 / j);
      out.radius_proxy = out.radius_proxy ? std::min(*out.radius_proxy, r) : r;
    }
    result.samples.push_back(std::move(out));
  }
  return result;
}

}  // namespace crs
