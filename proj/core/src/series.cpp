#include "crsing/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "crsing/errors.hpp"

namespace crs {

namespace {

int sat_add(int a, int b) {
  long long r = static_cast<long long>(a) + b;
  return static_cast<int>(std::min<long long>(r, kExact));
}

int sat_mul(int a, int b) {
  long long r = static_cast<long long>(a) * b;
  return static_cast<int>(std::min<long long>(r, kExact));
}

std::string monomial_string(const VarSpace& space, const Exponent& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += space.name(i);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- VarSpace

VarSpace::VarSpace(std::vector<std::string> names, std::vector<std::size_t> conj_pairing)
    : names_(std::move(names)), conj_(std::move(conj_pairing)) {
  if (!conj_.empty() && conj_.size() != names_.size())
    throw ShapeError("conjugation pairing must cover every variable");
  for (std::size_t i = 0; i < conj_.size(); ++i) {
    if (conj_[i] >= names_.size() || conj_[conj_[i]] != i)
      throw ShapeError("conjugation pairing must be an involution");
  }
}

std::shared_ptr<const VarSpace> VarSpace::cr(int n) {
  if (n < 1) throw ShapeError("CR dimension must be positive");
  std::vector<std::string> names;
  std::vector<std::size_t> conj;
  for (int a = 1; a <= n; ++a) names.push_back("z" + std::to_string(a));
  for (int a = 1; a <= n; ++a) names.push_back("c" + std::to_string(a));
  names.emplace_back("s");
  for (int a = 0; a < n; ++a) conj.push_back(static_cast<std::size_t>(n + a));
  for (int a = 0; a < n; ++a) conj.push_back(static_cast<std::size_t>(a));
  conj.push_back(static_cast<std::size_t>(2 * n));
  auto space = std::make_shared<VarSpace>(std::move(names), std::move(conj));
  space->cr_dim_ = n;
  return space;
}

std::shared_ptr<const VarSpace> VarSpace::holomorphic(int n) {
  std::vector<std::string> names;
  for (int a = 1; a <= n; ++a) names.push_back("z" + std::to_string(a));
  names.emplace_back("w");
  return std::make_shared<VarSpace>(std::move(names));
}

std::shared_ptr<const VarSpace> VarSpace::briot_bouquet(int dim) {
  std::vector<std::string> names{"t"};
  for (int j = 1; j <= dim; ++j) names.push_back("y" + std::to_string(j));
  return std::make_shared<VarSpace>(std::move(names));
}

std::shared_ptr<const VarSpace> VarSpace::univariate(std::string name) {
  return std::make_shared<VarSpace>(std::vector<std::string>{std::move(name)});
}

std::shared_ptr<const VarSpace> VarSpace::make(std::vector<std::string> names) {
  return std::make_shared<VarSpace>(std::move(names));
}

std::optional<std::size_t> VarSpace::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

// ------------------------------------------------------------------ Series

Series::Series(SpacePtr space, int trunc) : space_(std::move(space)), trunc_(trunc) {
  if (!space_) throw ShapeError("series needs a variable space");
}

Series Series::constant(SpacePtr space, int trunc, const GaussRational& value) {
  Series out(space, trunc);
  out.add_term(Exponent(out.space_->size(), 0), value);
  return out;
}

Series Series::variable(SpacePtr space, int trunc, std::size_t index) {
  Series out(space, trunc);
  if (index >= out.space_->size()) throw ShapeError("variable index out of range");
  Exponent e(out.space_->size(), 0);
  e[index] = 1;
  out.add_term(e, GaussRational(1));
  return out;
}

Series Series::monomial(SpacePtr space, int trunc, Exponent exp, const GaussRational& coef) {
  Series out(space, trunc);
  if (exp.size() != out.space_->size()) throw ShapeError("exponent length does not match space");
  out.add_term(exp, coef);
  return out;
}

GaussRational Series::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussRational() : it->second;
}

GaussRational Series::constant_term() const { return coefficient(Exponent(space_->size(), 0)); }

int Series::valuation() const {
  if (terms_.empty()) return sat_add(trunc_, 1);
  int v = std::numeric_limits<int>::max();
  for (const auto& [e, c] : terms_) v = std::min(v, total_degree(e));
  return v;
}

int Series::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

int Series::min_exponent(std::size_t var) const {
  int v = -1;
  for (const auto& [e, c] : terms_) {
    if (v < 0 || e[var] < v) v = e[var];
  }
  return v;
}

void Series::add_term(const Exponent& e, const GaussRational& coef) {
  if (coef.is_zero() || total_degree(e) > trunc_) return;
  auto [it, inserted] = terms_.try_emplace(e, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Series Series::truncated(int n) const {
  Series out(space_, std::min(n, trunc_));
  for (const auto& [e, c] : terms_) {
    if (total_degree(e) <= out.trunc_) out.terms_.emplace_hint(out.terms_.end(), e, c);
  }
  return out;
}

Series Series::with_space(SpacePtr space) const {
  if (space->size() != space_->size()) throw ShapeError("re-labelled space must have equal size");
  Series out = *this;
  out.space_ = std::move(space);
  return out;
}

void require_same_space(const Series& a, const Series& b) {
  if (a.space() != b.space() && !(*a.space() == *b.space()))
    throw ShapeError("series live in different variable spaces (" +
                     std::to_string(a.space()->size()) + " vs " + std::to_string(b.space()->size()) +
                     " variables)");
}

Series& Series::operator+=(const Series& o) {
  require_same_space(*this, o);
  if (o.trunc_ < trunc_) *this = truncated(o.trunc_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Series& Series::operator-=(const Series& o) {
  require_same_space(*this, o);
  if (o.trunc_ < trunc_) *this = truncated(o.trunc_);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Series& Series::operator*=(const GaussRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Series Series::operator-() const {
  Series out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

Series operator*(const Series& a, const Series& b) { return multiply(a, b); }

bool operator==(const Series& a, const Series& b) {
  if (!(*a.space() == *b.space())) return false;
  return a.terms_ == b.terms_;
}

std::string Series::to_string() const {
  if (terms_.empty()) return "0";
  // Canonical print order: ascending degree, then descending lexicographic
  // exponent, so z1 precedes c1 precedes s within a degree.
  std::vector<const TermMap::value_type*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* x, auto* y) {
    int dx = total_degree(x->first), dy = total_degree(y->first);
    if (dx != dy) return dx < dy;
    return x->first > y->first;
  });

  std::string out;
  for (auto* t : order) {
    const GaussRational& c = t->second;
    std::string mono = monomial_string(*space_, t->first);
    std::string coef;
    bool negative = false;
    if (c.is_real()) {
      negative = sgn(c.re()) < 0;
      GaussRational a = negative ? -c : c;
      coef = a.to_string();
    } else if (sgn(c.re()) == 0) {
      negative = sgn(c.im()) < 0;
      GaussRational a = negative ? -c : c;
      coef = a.to_string();
    } else {
      coef = c.to_string(true);
    }
    std::string piece;
    if (mono.empty()) {
      piece = coef;
    } else if (coef == "1") {
      piece = mono;
    } else {
      piece = coef + "*" + mono;
    }
    if (out.empty()) {
      out = (negative ? "-" : "") + piece;
    } else {
      out += negative ? " - " : " + ";
      out += piece;
    }
  }
  return out;
}

// -------------------------------------------------------------- arithmetic

Series multiply(const Series& a, const Series& b) {
  require_same_space(a, b);
  const int n = std::min(a.trunc(), b.trunc());
  Series out(a.space(), n);
  if (a.is_zero() || b.is_zero()) return out;

  struct Term {
    int deg;
    const Exponent* exp;
    const GaussRational* coef;
  };
  auto by_degree = [](const Series& s) {
    std::vector<Term> v;
    v.reserve(s.term_count());
    for (const auto& [e, c] : s.terms()) v.push_back({total_degree(e), &e, &c});
    std::stable_sort(v.begin(), v.end(), [](const Term& x, const Term& y) { return x.deg < y.deg; });
    return v;
  };
  const auto ta = by_degree(a);
  const auto tb = by_degree(b);

  Series::TermMap acc;
  Exponent e(a.space()->size());
  for (const Term& x : ta) {
    if (x.deg + tb.front().deg > n) break;
    for (const Term& y : tb) {
      if (x.deg + y.deg > n) break;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = static_cast<std::uint16_t>((*x.exp)[k] + (*y.exp)[k]);
      GaussRational prod = *x.coef;
      prod *= *y.coef;
      auto [it, inserted] = acc.try_emplace(e, std::move(prod));
      if (!inserted) it->second += prod;
    }
  }
  for (auto& [exp, c] : acc) {
    if (!c.is_zero()) out.add_term(exp, c);
  }
  return out;
}

Series pow(const Series& a, unsigned k) {
  Series result = Series::constant(a.space(), a.trunc(), GaussRational(1));
  Series base = a;
  while (k > 0) {
    if (k & 1U) result = multiply(result, base);
    k >>= 1U;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

Series partial_derivative(const Series& a, std::size_t var) {
  if (var >= a.space()->size()) throw ShapeError("variable index out of range");
  Series out(a.space(), a.is_exact() ? kExact : a.trunc() - 1);
  for (const auto& [e, c] : a.terms()) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    out.add_term(d, c * GaussRational(static_cast<long>(e[var])));
  }
  return out;
}

Series conjugate(const Series& a) {
  const VarSpace& sp = *a.space();
  if (!sp.has_conjugation()) throw ShapeError("space has no conjugation pairing");
  Series out(a.space(), a.trunc());
  for (const auto& [e, c] : a.terms()) {
    Exponent d(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) d[sp.conjugate_index(i)] = e[i];
    out.add_term(d, c.conj());
  }
  return out;
}

bool is_real(const Series& a) { return conjugate(a) == a; }

Series real_part(const Series& a) { return (a + conjugate(a)) * GaussRational(1, 2); }

Series imag_part(const Series& a) {
  // (a - conj a) / (2i) = -(i/2)(a - conj a)
  return (a - conjugate(a)) * GaussRational(mpq_class(0), mpq_class(-1, 2));
}

Series reciprocal(const Series& a, int exact_trunc) {
  const GaussRational a0 = a.constant_term();
  if (a0.is_zero()) throw ArithmeticError("reciprocal of a non-unit series (zero constant term)");
  int n = a.trunc();
  if (a.is_exact()) {
    if (exact_trunc < 0) {
      if (a.degree() == 0) return Series::constant(a.space(), kExact, a0.inverse());
      throw TruncationError("reciprocal of an exact polynomial needs an explicit order");
    }
    n = exact_trunc;
  }
  const GaussRational inv0 = a0.inverse();
  // a = a0 (1 - u) with u of positive valuation; 1/a = inv0 * sum u^k.
  Series u = a.truncated(n);
  u *= -inv0;
  u.add_term(Exponent(a.space()->size(), 0), GaussRational(1));
  Series result = Series::constant(a.space(), n, GaussRational(1));
  Series power = result;
  const int v = u.valuation();
  if (v > 0 && v <= n) {
    for (int k = 1; k * v <= n; ++k) {
      power = multiply(power, u);
      if (power.is_zero()) break;
      result += power;
    }
  }
  return result * inv0;
}

Series divide_by_var_power(const Series& a, std::size_t var, int k) {
  if (k < 0) throw ArithmeticError("negative power in division");
  Series out(a.space(), a.is_exact() ? kExact : a.trunc() - k);
  for (const auto& [e, c] : a.terms()) {
    if (e[var] < k) {
      throw ArithmeticError("not divisible by " + a.space()->name(var) + "^" + std::to_string(k) +
                            ": offending monomial " +
                            Series::monomial(a.space(), kExact, e, c).to_string());
    }
    Exponent d = e;
    d[var] = static_cast<std::uint16_t>(d[var] - k);
    out.add_term(d, c);
  }
  return out;
}

Series divide_by_s_power(const Series& a, int m) {
  if (a.space()->cr_dim() == 0) throw ShapeError("divide_by_s_power needs a CR coordinate space");
  return divide_by_var_power(a, a.space()->s(), m);
}

Series substitute(const Series& a, std::span<const Series> images) {
  if (images.size() != a.space()->size())
    throw ShapeError("substitution needs one image per variable (" + std::to_string(a.space()->size()) +
                     " expected, " + std::to_string(images.size()) + " given)");
  if (images.empty()) throw ShapeError("empty substitution");
  const SpacePtr target = images.front().space();
  int img_trunc = kExact;
  int v = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < images.size(); ++i) {
    require_same_space(images[i], images.front());
    // Only variables that actually occur constrain the result.
    if (a.min_exponent(i) < 0) continue;
    bool used = false;
    for (const auto& [e, c] : a.terms()) {
      if (e[i] > 0) {
        used = true;
        break;
      }
    }
    if (!used) continue;
    if (!images[i].constant_term().is_zero())
      throw ArithmeticError("substituted series for " + a.space()->name(i) + " has a nonzero constant term");
    img_trunc = std::min(img_trunc, images[i].trunc());
    v = std::min(v, images[i].valuation());
  }
  int n = img_trunc;
  if (!a.is_exact() && v != std::numeric_limits<int>::max()) n = std::min(n, sat_mul(a.trunc() + 1, v) - 1);
  if (v == std::numeric_limits<int>::max()) n = std::min(n, a.trunc());

  // Cached powers of each image, truncated to n.
  std::vector<std::vector<Series>> powers(images.size());
  auto power_of = [&](std::size_t var, int k) -> const Series& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(Series::constant(target, n, GaussRational(1)));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(multiply(cache.back(), images[var].truncated(n)));
    return cache[static_cast<std::size_t>(k)];
  };

  Series out(target, n);
  for (const auto& [e, c] : a.terms()) {
    Series term = Series::constant(target, n, c);
    for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i) {
      if (e[i] > 0) term = multiply(term, power_of(i, e[i]));
    }
    out += term;
  }
  return out;
}

Series compose(const Series& outer, const Series& inner) {
  if (outer.space()->size() != 1) throw ShapeError("compose expects a univariate outer series");
  return substitute(outer, std::span<const Series>(&inner, 1));
}

Series specialize(const Series& a, const std::map<std::size_t, GaussRational>& values, SpacePtr target) {
  if (target->size() + values.size() != a.space()->size())
    throw ShapeError("specialize: target space size mismatch");
  Series out(target, a.trunc());
  for (const auto& [e, c] : a.terms()) {
    GaussRational coef = c;
    Exponent d;
    d.reserve(target->size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto it = values.find(i);
      if (it == values.end()) {
        d.push_back(e[i]);
      } else {
        for (int k = 0; k < e[i]; ++k) coef *= it->second;
      }
    }
    out.add_term(d, coef);
  }
  return out;
}

Series coefficient_of_power(const Series& a, std::size_t var, int k) {
  Series out(a.space(), a.is_exact() ? kExact : a.trunc() - k);
  for (const auto& [e, c] : a.terms()) {
    if (e[var] != k) continue;
    Exponent d = e;
    d[var] = 0;
    out.add_term(d, c);
  }
  return out;
}

Series implicit_solve(const Series& g, SpacePtr param_space) {
  const VarSpace& gs = *g.space();
  if (param_space->size() + 1 != gs.size()) throw ShapeError("implicit_solve: parameter space must drop exactly t");
  for (std::size_t i = 0; i < param_space->size(); ++i) {
    if (param_space->name(i) != gs.name(i)) throw ShapeError("implicit_solve: parameter names must match G's leading variables");
  }
  const std::size_t t = gs.size() - 1;
  if (!g.constant_term().is_zero()) throw ValidationError("implicit_solve: G has a nonzero constant term");
  Exponent lin(gs.size(), 0);
  lin[t] = 1;
  if (!g.coefficient(lin).is_zero())
    throw ValidationError("implicit_solve: not a contraction, dG/dt(0) = " + g.coefficient(lin).to_string());
  if (g.is_exact()) throw TruncationError("implicit_solve needs a truncated G");

  const int n = g.trunc();
  std::vector<Series> images;
  for (std::size_t i = 0; i < param_space->size(); ++i) images.push_back(Series::variable(param_space, n, i));
  Series current(param_space, n);
  // Each pass fixes at least one more degree, so n+1 passes suffice.
  for (int pass = 0; pass <= n + 1; ++pass) {
    images.erase(images.begin() + static_cast<std::ptrdiff_t>(param_space->size()), images.end());
    images.push_back(current);
    Series next = substitute(g, images).truncated(n);
    if (next == current) return next;
    current = std::move(next);
  }
  throw ArithmeticError("implicit_solve: fixed-point iteration did not stabilize");
}

Series arctan_series(SpacePtr univariate, int order) {
  if (univariate->size() != 1) throw ShapeError("arctan_series expects a univariate space");
  Series u = Series::variable(univariate, order, 0);
  Series denom = Series::constant(univariate, order, GaussRational(1)) + multiply(u, u);
  Series deriv = reciprocal(denom);
  Series out(univariate, order);
  for (const auto& [e, c] : deriv.terms()) {
    Exponent d{static_cast<std::uint16_t>(e[0] + 1)};
    out.add_term(d, c / GaussRational(static_cast<long>(d[0])));
  }
  return out;
}

}  // namespace crs
