#include "crsing/crmap.hpp"

#include <algorithm>

namespace crs {

namespace {

bool is_holomorphic_space(const VarSpace& sp, int n) { return sp == *VarSpace::holomorphic(n); }

Series s_power(const SpacePtr& sp, int m) {
  Exponent e(sp->size(), 0);
  e[sp->s()] = static_cast<std::uint16_t>(m);
  return Series::monomial(sp, kExact, e, GaussRational(1));
}

std::string index_label(std::initializer_list<int> idx) {
  std::string out;
  for (int i : idx) out += "[" + std::to_string(i + 1) + "]";
  return out;
}

}  // namespace

HoloMap::HoloMap(std::vector<Series> components, Hypersurface source, Hypersurface target)
    : comps_(std::move(components)), source_(std::move(source)), target_(std::move(target)) {
  const int n = source_.n();
  if (target_.n() != n) throw ShapeError("source and target must have the same CR dimension");
  if (comps_.size() != static_cast<std::size_t>(n + 1))
    throw ShapeError("a map needs " + std::to_string(n + 1) + " components");
  for (std::size_t j = 0; j < comps_.size(); ++j) {
    if (!is_holomorphic_space(*comps_[j].space(), n))
      throw ShapeError("map components must be series in z1..z" + std::to_string(n) + ", w");
    if (!comps_[j].constant_term().is_zero())
      throw ValidationError("map component F" + std::to_string(j + 1) + " does not fix the origin");
  }
}

HoloMap HoloMap::identity(const Hypersurface& source, int trunc) {
  const SpacePtr sp = VarSpace::holomorphic(source.n());
  std::vector<Series> comps;
  for (std::size_t j = 0; j < sp->size(); ++j) comps.push_back(Series::variable(sp, trunc, j));
  return HoloMap(std::move(comps), source, source);
}

Series RestrictedMap::pullback(const Series& g) const {
  const std::vector<Series> images = coordinates();
  return substitute(g, images);
}

std::vector<Series> RestrictedMap::coordinates() const {
  std::vector<Series> out = z_hat;
  out.insert(out.end(), c_hat.begin(), c_hat.end());
  out.push_back(s_hat);
  return out;
}

RestrictedMap restrict_map(const HoloMap& f) {
  const Hypersurface& src = f.source();
  const SpacePtr& sp = src.space();
  const int n = src.n();
  std::vector<Series> images;
  for (int a = 0; a < n; ++a) images.push_back(Series::variable(sp, kExact, sp->z(a)));
  images.push_back(Series::variable(sp, kExact, sp->s()) + Series::constant(sp, kExact, GaussRational::i()) * src.phi());

  RestrictedMap out{{}, {}, Series(sp, kExact), Series(sp, kExact)};
  for (int a = 0; a < n; ++a) {
    out.z_hat.push_back(substitute(f.components()[static_cast<std::size_t>(a)], images));
    out.c_hat.push_back(conjugate(out.z_hat.back()));
  }
  out.w_hat = substitute(f.components().back(), images);
  out.s_hat = real_part(out.w_hat);
  return out;
}

Series maps_into(const HoloMap& f) {
  const RestrictedMap r = restrict_map(f);
  const Series phi_hat = r.pullback(f.target().phi().with_space(f.source().space()));
  return imag_part(r.w_hat) - phi_hat;
}

namespace {

struct Pushforward {
  const RestrictedMap& r;
  std::vector<Series> coords;
  SeriesMatrix coframe;  // target coframe composed with f

  Pushforward(const RestrictedMap& rm, const Frame& target_frame, const SpacePtr& source_space) : r(rm) {
    coords = rm.coordinates();
    for (const auto& row : target_frame.coframe()) {
      std::vector<Series> pulled;
      for (const auto& x : row) pulled.push_back(rm.pullback(x.with_space(source_space)));
      coframe.push_back(std::move(pulled));
    }
  }

  std::vector<Series> operator()(const VectorField& x) const {
    std::vector<Series> dx;
    for (const auto& c : coords) dx.push_back(x.apply(c));
    std::vector<Series> out;
    for (const auto& row : coframe) {
      Series acc = row[0] * dx[0];
      for (std::size_t i = 1; i < row.size(); ++i) acc += row[i] * dx[i];
      out.push_back(std::move(acc));
    }
    return out;
  }
};

}  // namespace

MapFrameData frame_data(const HoloMap& f) {
  const InfiniteType src_type = compute_infinite_type(f.source());
  const InfiniteType tgt_type = compute_infinite_type(f.target());
  if (src_type.levi_flat()) throw XiSingularError("source is Levi-flat; s^m T is undefined");
  if (tgt_type.levi_flat()) throw XiSingularError("target is Levi-flat; xi has no T_hat normalization");
  const int n = f.n();
  const SpacePtr& sp = f.source().space();
  const Frame src = build_frame(f.source());
  const Frame tgt = build_frame(f.target());
  const RestrictedMap r = restrict_map(f);
  const Pushforward push(r, tgt, sp);

  MapFrameData out{{}, {}, Series(sp, kExact), Series(sp, kExact), r.s_hat};
  out.m = *src_type.m;
  out.m_hat = *tgt_type.m;
  bool tri = true;

  const VectorField S = src.T().scaled(s_power(sp, out.m));
  const std::vector<Series> ps = push(S);
  out.tau = ps[0];
  for (int a = 0; a < n; ++a) {
    out.eta.push_back(ps[Frame::index_L(a)]);
    if (ps[tgt.index_Lbar(a)] != conjugate(out.eta.back())) tri = false;
  }
  out.gamma.assign(static_cast<std::size_t>(n), std::vector<Series>(static_cast<std::size_t>(n), Series(sp, kExact)));
  for (int b = 0; b < n; ++b) {
    const std::vector<Series> pl = push(src.L(b));
    const std::vector<Series> pbar = push(src.Lbar(b));
    if (!pl[0].is_zero() || !pbar[0].is_zero()) tri = false;
    for (int a = 0; a < n; ++a) {
      out.gamma[a][b] = pl[Frame::index_L(a)];
      if (!pl[tgt.index_Lbar(a)].is_zero() || !pbar[Frame::index_L(a)].is_zero()) tri = false;
      if (pbar[tgt.index_Lbar(a)] != conjugate(out.gamma[a][b])) tri = false;
    }
  }
  out.triangular = tri;

  if (r.s_hat.is_zero()) throw XiSingularError("s o f vanishes identically at truncation");
  const int v = r.s_hat.min_exponent(sp->s());
  out.s_hat_valuation = v;
  const Series unit = divide_by_s_power(r.s_hat, v);
  if (unit.constant_term().is_zero())
    throw XiSingularError("s o f is not s^" + std::to_string(v) + " times a unit");
  try {
    out.xi = divide_by_s_power(out.tau, v * out.m_hat) * pow(reciprocal(unit), static_cast<unsigned>(out.m_hat));
  } catch (const ArithmeticError& e) {
    throw XiSingularError(std::string("xi is singular: ") + e.what());
  }
  return out;
}

bool ResidualReport::all_zero() const {
  if (!xi_smooth || !map_residual.is_zero()) return false;
  return std::all_of(identities.begin(), identities.end(),
                     [](const Residual& r) { return r.diagnostic || r.value.is_zero(); });
}

ResidualReport check_identities(const HoloMap& f) {
  ResidualReport out{maps_into(f), {}, false, std::nullopt, {}};
  std::optional<MapFrameData> data;
  try {
    data = frame_data(f);
  } catch (const XiSingularError& e) {
    out.certificate = e.what();
    return out;
  }
  const MapFrameData& d = *data;
  out.xi_smooth = true;
  out.xi = d.xi;
  out.certificate = "tau divisible by s^" + std::to_string(d.s_hat_valuation * d.m_hat);

  const int n = f.n();
  const SpacePtr& sp = f.source().space();
  const GaussRational two_i = GaussRational(2) * GaussRational::i();
  const Frame src = build_frame(f.source());
  const Frame tgt = build_frame(f.target());
  const Desingularized ds = desingularize(src, levi_matrix(src), d.m);
  const Desingularized dt = desingularize(tgt, levi_matrix(tgt), d.m_hat);
  const RestrictedMap r = restrict_map(f);

  SeriesMatrix g0(static_cast<std::size_t>(n)), g0_hat(static_cast<std::size_t>(n));
  std::vector<Series> h0bar_hat;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      g0[a].push_back(ds.h0[a][b] * two_i);
      g0_hat[a].push_back(r.pullback(dt.h0[a][b].with_space(sp)) * two_i);
    }
    h0bar_hat.push_back(r.pullback(dt.h0_bar[a].with_space(sp)));
  }
  const VectorField S = src.T().scaled(s_power(sp, d.m));
  auto cg = [&](int c, int a) { return conjugate(d.gamma[c][a]); };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Series rhs(sp, kExact);
      for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) rhs += cg(c, a) * d.gamma[e][b] * g0_hat[c][e];
      out.identities.push_back({"levi_transfer" + index_label({a, b}), d.xi * g0[a][b] - rhs, false});
    }

  for (int a = 0; a < n; ++a) {
    Series base = src.Lbar(a).apply(d.xi) + d.xi * ds.h0_bar[a];
    Series eta_term(sp, kExact);
    for (int c = 0; c < n; ++c) {
      base -= d.xi * cg(c, a) * h0bar_hat[c];
      for (int e = 0; e < n; ++e) eta_term += cg(c, a) * d.eta[e] * g0_hat[c][e];
    }
    out.identities.push_back({"xi_transport" + index_label({a}), base + eta_term, false});
    out.identities.push_back({"xi_transport_alt" + index_label({a}), base - eta_term, true});
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int e = 0; e < n; ++e) {
        const Series lg = src.Lbar(a).apply(d.gamma[e][b]);
        out.identities.push_back({"gamma_transport" + index_label({a, b, e}), lg - d.eta[e] * g0[a][b], false});
        out.identities.push_back({"gamma_transport_alt" + index_label({a, b, e}), lg + d.eta[e] * g0[a][b], true});
      }

  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e)
      out.identities.push_back({"eta_transport" + index_label({a, e}),
                                src.Lbar(a).apply(d.eta[e]) + d.eta[e] * ds.h0_bar[a], false});

  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e)
      out.identities.push_back({"s_gamma_commutator" + index_label({a, e}),
                                S.apply(d.gamma[e][a]) - src.L(a).apply(d.eta[e]) -
                                    d.eta[e] * conjugate(ds.h0_bar[a]),
                                false});
  return out;
}

HoloMap compose(const HoloMap& outer, const HoloMap& inner) {
  if (inner.target().phi() != outer.source().phi())
    throw ShapeError("compose: target of the inner map differs from the source of the outer map");
  std::vector<Series> comps;
  for (const auto& c : outer.components()) comps.push_back(substitute(c, inner.components()));
  return HoloMap(std::move(comps), inner.source(), outer.target());
}

Hypersurface power_map_target(int k, int trunc) {
  if (k < 1) throw ValidationError("power map exponent must be positive");
  const SpacePtr sp = VarSpace::cr(1);
  // (s + i t)^k = sum_j C(k, j) i^{k-j} s^j t^{k-j}.
  Series num(sp, kExact), den = Series::constant(sp, kExact, GaussRational(1));
  const Series u = Series::variable(sp, kExact, sp->z(0)) * Series::variable(sp, kExact, sp->c(0));
  mpz_class binom = 1;
  GaussRational ipow(1);
  for (int step = 0; step < k; ++step) ipow *= GaussRational::i();  // i^k for j = 0
  const GaussRational minus_i = -GaussRational::i();
  for (int j = 0; j < k; ++j) {
    if (j > 0) {
      binom = binom * (k - j + 1) / j;
      ipow *= minus_i;
    }
    const GaussRational coef = GaussRational(mpq_class(binom)) * ipow;
    const Series term = pow(u, static_cast<unsigned>(k - j));
    den += term * GaussRational(coef.re());
    num += term * GaussRational(coef.im());
  }
  const Series h = num * reciprocal(den, trunc);
  return Hypersurface((Series::variable(sp, kExact, sp->s()) * h).truncated(trunc));
}

}  // namespace crs
