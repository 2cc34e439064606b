#include "crsing/frame.hpp"

#include <algorithm>

#include "crsing/errors.hpp"

namespace crs {

namespace {

Series zero_like(const Series& like) { return Series(like.space(), kExact); }

Series divide_s_or_violation(const Series& a, int m, const std::string& what) {
  try {
    return divide_by_s_power(a, m);
  } catch (const ArithmeticError& e) {
    throw InvariantViolation(what + " is " + e.what());
  }
}

int finite_trunc(const SeriesMatrix& m) {
  int t = -1;
  for (const auto& row : m)
    for (const auto& x : row)
      if (!x.is_exact()) t = std::max(t, x.trunc());
  return t;
}

}  // namespace

VectorField::VectorField(std::vector<Series> components) : comps_(std::move(components)) {
  if (comps_.empty()) throw ShapeError("vector field needs at least one component");
  if (comps_.size() != comps_.front().space()->size())
    throw ShapeError("vector field needs one component per coordinate");
  for (const auto& c : comps_) require_same_space(comps_.front(), c);
}

VectorField VectorField::zero(const SpacePtr& space, int trunc) {
  return VectorField(std::vector<Series>(space->size(), Series(space, trunc)));
}

VectorField VectorField::coordinate(const SpacePtr& space, int trunc, std::size_t var) {
  std::vector<Series> comps(space->size(), Series(space, trunc));
  comps.at(var) = Series::constant(space, trunc, GaussRational(1));
  return VectorField(std::move(comps));
}

Series VectorField::apply(const Series& f) const {
  require_same_space(comps_.front(), f);
  Series out = zero_like(f);
  bool first = true;
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    Series term = comps_[j] * partial_derivative(f, j);
    if (first) {
      out = std::move(term);
      first = false;
    } else {
      out += term;
    }
  }
  return out;
}

VectorField VectorField::scaled(const Series& f) const {
  std::vector<Series> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(f * c);
  return VectorField(std::move(comps));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.comps_.size() != b.comps_.size()) throw ShapeError("vector field sum: dimension mismatch");
  std::vector<Series> comps;
  for (std::size_t i = 0; i < a.comps_.size(); ++i) comps.push_back(a.comps_[i] + b.comps_[i]);
  return VectorField(std::move(comps));
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  std::vector<Series> comps;
  comps.reserve(x.components().size());
  for (std::size_t i = 0; i < x.components().size(); ++i) comps.push_back(x.apply(y[i]) - y.apply(x[i]));
  return VectorField(std::move(comps));
}

Frame::Frame(Hypersurface surface, std::vector<VectorField> vectors, SeriesMatrix coframe)
    : surface_(std::move(surface)), vectors_(std::move(vectors)), coframe_(std::move(coframe)) {
  const std::size_t dim = static_cast<std::size_t>(2 * surface_.n() + 1);
  if (vectors_.size() != dim || coframe_.size() != dim) throw ShapeError("frame needs 2n+1 vectors and forms");
}

std::vector<Series> Frame::decompose(const VectorField& v) const {
  std::vector<Series> out;
  out.reserve(coframe_.size());
  for (const auto& row : coframe_) {
    Series acc = row[0] * v[0];
    for (std::size_t i = 1; i < row.size(); ++i) acc += row[i] * v[i];
    out.push_back(std::move(acc));
  }
  return out;
}

SeriesMatrix invert(const SeriesMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw ShapeError("invert: matrix is not square");
  if (n == 0) return {};
  const int order = std::max(0, finite_trunc(m));
  const SpacePtr space = m[0][0].space();
  SeriesMatrix a = m;
  SeriesMatrix inv(n, std::vector<Series>(n, Series(space, kExact)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Series::constant(space, kExact, GaussRational(1));

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a[p][col].constant_term().is_zero()) ++p;
    if (p == n) throw ArithmeticError("invert: constant part of the matrix is singular");
    std::swap(a[p], a[col]);
    std::swap(inv[p], inv[col]);
    const Series piv = reciprocal(a[col][col], order);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = piv * a[col][j];
      inv[col][j] = piv * inv[col][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col].is_zero()) continue;
      const Series f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Frame build_frame(const Hypersurface& h) {
  const SpacePtr& sp = h.space();
  const int n = h.n();
  const int N = h.trunc();
  const std::size_t s = sp->s();
  const Series& phi = h.phi();
  const Series i_unit = Series::constant(sp, kExact, GaussRational::i());
  const Series one = Series::constant(sp, kExact, GaussRational(1));

  // L_A = d/dz_A + q_A d/ds, q_A = i phi_{z_A} / (1 - i phi_s).
  const Series denom = reciprocal(one - i_unit * partial_derivative(phi, s), N);
  std::vector<VectorField> vectors;
  vectors.push_back(VectorField::coordinate(sp, kExact, s));
  std::vector<Series> q;
  for (int a = 0; a < n; ++a) q.push_back(i_unit * partial_derivative(phi, sp->z(a)) * denom);
  for (int a = 0; a < n; ++a) {
    std::vector<Series> comps(sp->size(), Series(sp, kExact));
    comps[sp->z(a)] = one;
    comps[s] = q[a];
    vectors.emplace_back(std::move(comps));
  }
  for (int a = 0; a < n; ++a) {
    std::vector<Series> comps(sp->size(), Series(sp, kExact));
    comps[sp->c(a)] = one;
    comps[s] = conjugate(q[a]);
    vectors.emplace_back(std::move(comps));
  }

  // Columns of the frame matrix are the frame vectors; its inverse has the
  // coframe as rows.
  const std::size_t dim = vectors.size();
  SeriesMatrix fm(dim, std::vector<Series>(dim, Series(sp, kExact)));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) fm[i][k] = vectors[k][i];
  SeriesMatrix co = invert(fm);
  return Frame(h, std::move(vectors), std::move(co));
}

std::vector<Series> bracket_decompose(const VectorField& x, const VectorField& y, const Frame& frame) {
  return frame.decompose(bracket(x, y));
}

CoFrameForm characteristic_form(const Frame& frame) {
  CoFrameForm w;
  w.pairings.assign(frame.size(), Series(frame.space(), kExact));
  w.pairings[0] = Series::constant(frame.space(), kExact, GaussRational(1));
  return w;
}

namespace {

CoFrameForm derive_with(const CoFrameForm& w, const VectorField& x, const std::vector<std::vector<Series>>& brackets) {
  CoFrameForm out;
  out.pairings.reserve(w.pairings.size());
  for (std::size_t k = 0; k < w.pairings.size(); ++k) {
    Series acc = x.apply(w.pairings[k]);
    for (std::size_t j = 0; j < w.pairings.size(); ++j) acc -= brackets[k][j] * w.pairings[j];
    out.pairings.push_back(std::move(acc));
  }
  return out;
}

std::vector<std::vector<Series>> bracket_table(const VectorField& x, const Frame& frame) {
  std::vector<std::vector<Series>> table;
  table.reserve(frame.size());
  for (std::size_t k = 0; k < frame.size(); ++k) table.push_back(bracket_decompose(x, frame.vector(k), frame));
  return table;
}

}  // namespace

CoFrameForm lie_derivative(const CoFrameForm& w, const VectorField& x, const Frame& frame) {
  if (w.pairings.size() != frame.size()) throw ShapeError("lie_derivative: form does not match the frame");
  return derive_with(w, x, bracket_table(x, frame));
}

SeriesMatrix levi_matrix(const Frame& frame) {
  const int n = frame.n();
  const GaussRational inv2i = (GaussRational(2) * GaussRational::i()).inverse();
  SeriesMatrix h(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const VectorField br = bracket(frame.Lbar(a), frame.L(b));
      Series theta_br = frame.coframe_row(0)[0] * br[0];
      for (std::size_t i = 1; i < br.components().size(); ++i) theta_br += frame.coframe_row(0)[i] * br[i];
      h[a].push_back(theta_br * inv2i);
    }
  }
  return h;
}

IteratedForms::IteratedForms(std::shared_ptr<const Frame> frame) : frame_(std::move(frame)) {
  forms_.emplace(Word{}, characteristic_form(*frame_));
}

void IteratedForms::extend() {
  const int n = frame_->n();
  if (brackets_.empty()) {
    for (int c = 0; c < n; ++c) brackets_.push_back(bracket_table(frame_->Lbar(c), *frame_));
  }
  std::vector<std::pair<Word, CoFrameForm>> added;
  for (const auto& [word, form] : forms_) {
    if (static_cast<int>(word.size()) != length_) continue;
    for (int c = 0; c < n; ++c) {
      Word next = word;
      next.push_back(c);
      added.emplace_back(std::move(next), derive(form, c));
    }
  }
  for (auto& [w, f] : added) forms_.emplace(std::move(w), std::move(f));
  ++length_;
}

void IteratedForms::extend_to(int length) {
  while (length_ < length) extend();
}

const CoFrameForm& IteratedForms::form(const Word& word) const {
  auto it = forms_.find(word);
  if (it == forms_.end()) throw ShapeError("iterated form of length " + std::to_string(word.size()) + " not computed");
  return it->second;
}

const Series& IteratedForms::h(const Word& word, int d) const {
  return form(word).pairings.at(Frame::index_L(d));
}

const Series& IteratedForms::h_T(const Word& word) const { return form(word).on_T(); }

CoFrameForm IteratedForms::derive(const CoFrameForm& w, int c) const {
  if (brackets_.empty()) {
    return derive_with(w, frame_->Lbar(c), bracket_table(frame_->Lbar(c), *frame_));
  }
  return derive_with(w, frame_->Lbar(c), brackets_.at(static_cast<std::size_t>(c)));
}

Series iterated_h(const Frame& frame, const Word& word, std::optional<int> tail) {
  CoFrameForm w = characteristic_form(frame);
  for (int c : word) w = lie_derivative(w, frame.Lbar(c), frame);
  if (!tail) return w.on_T();
  return w.pairings.at(Frame::index_L(*tail));
}

Series recursion_residual(const IteratedForms& forms, const Word& word, int c, int d) {
  Word longer = word;
  longer.push_back(c);
  const Frame& frame = forms.frame();
  const Series lhs = forms.h(longer, d);
  const Series rhs = frame.Lbar(c).apply(forms.h(word, d)) + forms.h_T(word) * forms.h(Word{c}, d);
  return lhs - rhs;
}

Desingularized desingularize(const Frame& frame, const SeriesMatrix& h, int m) {
  const int n = frame.n();
  const SpacePtr& sp = frame.space();
  const std::size_t s = sp->s();
  Desingularized out;
  out.m = m;
  for (int a = 0; a < n; ++a) {
    std::vector<Series> row;
    for (int b = 0; b < n; ++b) {
      row.push_back(divide_s_or_violation(h[a][b], m,
                                          "h_{" + std::to_string(a + 1) + "bar " + std::to_string(b + 1) + "}"));
    }
    out.h0.push_back(std::move(row));
  }

  // S = s^m T; [L_Abar, S] = -s^m h0_Abar T.
  const Series sm = Series::monomial(sp, kExact, [&] {
    Exponent e(sp->size(), 0);
    e[s] = static_cast<std::uint16_t>(m);
    return e;
  }(), GaussRational(1));
  const VectorField S = frame.T().scaled(sm);
  const Series svar = Series::variable(sp, kExact, s);
  for (int a = 0; a < n; ++a) {
    const std::vector<Series> comps = bracket_decompose(frame.Lbar(a), S, frame);
    for (std::size_t k = 1; k < comps.size(); ++k) {
      if (!comps[k].is_zero())
        throw InvariantViolation("[L_bar, s^m T] has a component off T at monomial " +
                                 Series::monomial(sp, kExact, comps[k].terms().begin()->first,
                                                  comps[k].terms().begin()->second)
                                     .to_string());
    }
    out.h0_bar.push_back(
        -divide_s_or_violation(comps[0], m, "the T-component of [L_" + std::to_string(a + 1) + "bar, s^m T]"));
    const Series ls = frame.Lbar(a).apply(svar);
    out.a_bar.push_back(divide_s_or_violation(ls, 1, "L_" + std::to_string(a + 1) + "bar s") *
                        GaussRational(static_cast<long>(m)));
  }
  return out;
}

LeadingTermCheck check_leading_term(const Frame& frame, const SeriesMatrix& h, int m) {
  LeadingTermCheck out;
  const InfiniteType type = compute_infinite_type(frame.surface());
  if (type.levi_flat()) return out;
  const SpacePtr& sp = frame.space();
  const int n = frame.n();
  const int r = *type.r;
  Desingularized d;
  try {
    d = desingularize(frame, h, m);
  } catch (const InvariantViolation&) {
    return out;
  }
  out.divisible = true;

  // alpha: degree-r part of phi_m.
  Series alpha(sp, kExact);
  for (const auto& [e, c] : type.phi_m->terms())
    if (total_degree(e) == r) alpha.add_term(e, c);

  bool any_nonzero = false;
  bool match = true;
  for (int a = 0; a < n; ++a) {
    std::vector<Series> hrow, lrow;
    for (int b = 0; b < n; ++b) {
      Series hess = partial_derivative(partial_derivative(alpha, sp->c(a)), sp->z(b));
      Series lead(sp, kExact);
      for (const auto& [e, c] : d.h0[a][b].terms())
        if (e[sp->s()] == 0 && total_degree(e) == r - 2) lead.add_term(e, c);
      if (d.h0[a][b].trunc() < r - 2) match = false;
      if (!lead.is_zero()) any_nonzero = true;
      if (lead != hess) match = false;
      hrow.push_back(std::move(hess));
      lrow.push_back(std::move(lead));
    }
    out.hessian.push_back(std::move(hrow));
    out.leading.push_back(std::move(lrow));
  }
  out.nonvanishing_on_E = any_nonzero;
  out.matches_hessian = match;
  return out;
}

int max_filtration_length(const Frame& frame, int m) { return frame.surface().trunc() - m - 1; }

namespace {

void all_words(int n, int len, Word& cur, std::vector<Word>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int c = 0; c < n; ++c) {
    cur.push_back(c);
    all_words(n, len, cur, out);
    cur.pop_back();
  }
}

std::vector<Word> words_of_length(int n, int len) {
  std::vector<Word> out;
  Word cur;
  all_words(n, len, cur, out);
  return out;
}

bool in_span(const std::vector<Vector>& basis, const Vector& v, std::size_t n) {
  if (basis.empty()) {
    for (const auto& x : v)
      if (!x.is_zero()) return false;
    return true;
  }
  std::vector<Vector> rows = basis;
  const std::size_t before = rank(Matrix::from_rows(rows, n));
  rows.push_back(v);
  return rank(Matrix::from_rows(rows, n)) == before;
}

}  // namespace

Filtration filtration(const Frame& frame, int m, int ell_max) {
  const int n = frame.n();
  const std::size_t un = static_cast<std::size_t>(n);
  if (ell_max < 1) throw ValidationError("ell_max must be at least 1");
  if (ell_max > max_filtration_length(frame, m)) {
    throw TruncationError("filtration to length " + std::to_string(ell_max) + " needs truncation order at least " +
                          std::to_string(ell_max + m + 1) + " (have " + std::to_string(frame.surface().trunc()) + ")");
  }

  auto shared = std::make_shared<const Frame>(frame);
  IteratedForms forms(shared);

  // values[k][word] = (h0_{word D}(0))_D for |word| = k >= 1.
  std::vector<std::map<Word, Vector>> values(1);
  std::vector<Vector> rows;
  std::vector<std::vector<Vector>> kernels;  // kernels[k] = basis of F_k(0)
  {
    std::vector<Vector> e;
    for (std::size_t j = 0; j < un; ++j) {
      Vector v(un);
      v[j] = GaussRational(1);
      e.push_back(std::move(v));
    }
    kernels.push_back(std::move(e));
  }
  Filtration out;
  out.ell_max = ell_max;
  out.ranks.push_back(0);

  for (int k = 1; k <= ell_max; ++k) {
    forms.extend_to(k);
    std::map<Word, Vector> level;
    for (const Word& w : words_of_length(n, k)) {
      Vector row(un);
      for (int d = 0; d < n; ++d) {
        const Series h0 = divide_s_or_violation(forms.h(w, d), m, "iterated h");
        if (h0.trunc() < 0) throw TruncationError("iterated h values at the origin are beyond the truncation order");
        row[static_cast<std::size_t>(d)] = h0.constant_term();
      }
      rows.push_back(row);
      level.emplace(w, std::move(row));
    }
    values.push_back(std::move(level));
    kernels.push_back(kernel(Matrix::from_rows(rows, un)));
    out.ranks.push_back(n - static_cast<int>(kernels.back().size()));
    if (kernels.back().empty()) break;
  }

  const int checked = static_cast<int>(out.ranks.size()) - 1;
  out.nondegenerate = out.ranks.back() == n;
  out.ell = checked;
  while (out.ell > 0 && out.ranks[static_cast<std::size_t>(out.ell - 1)] == out.ranks.back()) --out.ell;
  if (checked >= 1) {
    bool t2 = false;
    for (const auto& [w, v] : values[1])
      for (const auto& x : v)
        if (!x.is_zero()) t2 = true;
    out.type2 = t2;
  }

  // Adapted basis: deepest level first, then extend outwards.
  std::vector<std::vector<Vector>> groups(static_cast<std::size_t>(checked) + 1);
  std::vector<Vector> chosen;
  for (int k = checked; k >= 0; --k) {
    for (const auto& v : kernels[static_cast<std::size_t>(k)]) {
      if (!in_span(chosen, v, un)) {
        chosen.push_back(v);
        groups[static_cast<std::size_t>(k)].push_back(v);
      }
    }
  }
  Matrix P(un, un);
  std::size_t col = 0;
  for (const auto& g : groups)
    for (const auto& v : g) {
      for (std::size_t i = 0; i < un; ++i) P(i, col) = v[i];
      ++col;
    }
  out.basis_change = P;

  // Values in the adapted basis: conj(P) on each letter, P on the tail.
  auto transformed = [&](const Word& word, std::size_t tail) {
    // sum over original words weighted by prod conj(P_{B_j, A_j}) times P_{E, tail}.
    const int len = static_cast<int>(word.size());
    GaussRational acc;
    for (const auto& [orig, v] : values[static_cast<std::size_t>(len)]) {
      GaussRational weight(1);
      for (int j = 0; j < len && !weight.is_zero(); ++j)
        weight *= P(static_cast<std::size_t>(orig[j]), static_cast<std::size_t>(word[j])).conj();
      if (weight.is_zero()) continue;
      for (std::size_t e = 0; e < un; ++e) acc += weight * P(e, tail) * v[e];
    }
    return acc;
  };

  bool vanish = true;
  for (int k = 1; k <= checked; ++k) {
    // Directions a' with index >= r_{k-1} lie in F_{k-1}; every word of
    // length j < k must give zero on them.
    for (int j = 1; j < k; ++j)
      for (const Word& w : words_of_length(n, j))
        for (std::size_t a = static_cast<std::size_t>(out.ranks[static_cast<std::size_t>(k - 1)]); a < un; ++a)
          if (!transformed(w, a).is_zero()) vanish = false;
  }
  out.lower_levels_vanish = vanish;

  bool refine = true;
  for (int k = 1; k <= checked; ++k) {
    const std::size_t lo = static_cast<std::size_t>(out.ranks[static_cast<std::size_t>(k - 1)]);
    const std::size_t hi = static_cast<std::size_t>(out.ranks[static_cast<std::size_t>(k)]);
    if (lo == un) continue;
    std::vector<Vector> block;
    for (const Word& w : words_of_length(n, k)) {
      Vector row;
      for (std::size_t a = lo; a < un; ++a) row.push_back(transformed(w, a));
      block.push_back(std::move(row));
    }
    for (const auto& v : kernel(Matrix::from_rows(block, un - lo)))
      for (std::size_t a = lo; a < hi; ++a)
        if (!v[a - lo].is_zero()) refine = false;
  }
  out.kernel_refinement_holds = refine;
  return out;
}

}  // namespace crs
