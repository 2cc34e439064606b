#include "crsing/crmap.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crs;
using crs::testing::cr;
using crs::testing::lit;

namespace {

Hypersurface m0(int trunc) { return Hypersurface(cr(1, "s*z1*c1", trunc)); }

HoloMap power_map(const Hypersurface& source, const Hypersurface& target, int k) {
  const SpacePtr hs = VarSpace::holomorphic(1);
  return HoloMap({lit(hs, "z1"), pow(lit(hs, "w"), static_cast<unsigned>(k))}, source, target);
}

// tan(k arctan u) through the addition rule h_{k+1} = (h_k + u) / (1 - u h_k).
Series tangent_multiple(int k, int order) {
  const SpacePtr u = VarSpace::univariate("u");
  const Series x = lit(u, "u");
  Series h = x.truncated(order);
  for (int j = 1; j < k; ++j) h = (h + x) * reciprocal(Series::constant(u, kExact, 1) - x * h, order);
  return h;
}

// Image of s*z1*c1 under (z, w) -> (z (1 + w), w): t = s z c / ((1 + s)^2 + t^2).
Hypersurface shear_image(int trunc) {
  const SpacePtr g = VarSpace::make({"z1", "c1", "s", "t"});
  const Series rhs = lit(g, "s*z1*c1", trunc) * reciprocal(lit(g, "(1+s)^2 + t^2"), trunc);
  return Hypersurface(implicit_solve(rhs, VarSpace::cr(1)));
}

void check_all_zero(const ResidualReport& rep) {
  CHECK(rep.map_residual.is_zero());
  CHECK(rep.xi_smooth);
  for (const auto& r : rep.identities) {
    if (r.diagnostic) continue;
    CAPTURE(r.name);
    CHECK(r.value.is_zero());
  }
  CHECK(rep.all_zero());
}

}  // namespace

TEST_SUITE("crmap") {

TEST_CASE("restriction of the identity and of the square") {
  const Hypersurface src = m0(8);
  const RestrictedMap id = restrict_map(HoloMap::identity(src));
  CHECK(id.w_hat == cr(1, "s + i*s*z1*c1", kExact));
  const RestrictedMap sq = restrict_map(power_map(src, src, 2));
  CHECK(sq.s_hat == cr(1, "s^2 - s^2*z1^2*c1^2", kExact));
}

TEST_CASE("constant map restricts to zero") {
  const SpacePtr hs = VarSpace::holomorphic(1);
  const Hypersurface src = m0(6);
  const RestrictedMap r = restrict_map(HoloMap({lit(hs, "z1"), lit(hs, "0")}, src, src));
  CHECK(r.w_hat.is_zero());
}

TEST_CASE("power map target matches the tangent multiple") {
  for (int k = 1; k <= 5; ++k) {
    const int trunc = 2 * k + 4;
    const Hypersurface t = power_map_target(k, trunc);
    const Series h = tangent_multiple(k, trunc);
    const std::vector<Series> u_image{cr(1, "z1*c1", kExact)};
    const Series expected = (cr(1, "s", kExact) * substitute(h, u_image)).truncated(trunc);
    CAPTURE(k);
    CHECK(t.phi() == expected);
  }
  CHECK(power_map_target(2, 8).phi() == cr(1, "2*s*z1*c1 + 2*s*z1^3*c1^3", kExact));
}

TEST_CASE("power maps land in the matching target") {
  for (int k = 2; k <= 4; ++k) {
    const int trunc = 2 * k + 4;
    CAPTURE(k);
    CHECK(maps_into(power_map(m0(trunc), power_map_target(k, trunc), k)).is_zero());
  }
}

TEST_CASE("square into the source itself is rejected") {
  const Series res = maps_into(power_map(m0(8), m0(8), 2));
  CHECK_FALSE(res.is_zero());
  CHECK(res.valuation() == 4);
}

TEST_CASE("identity map frame data") {
  const MapFrameData d = frame_data(HoloMap::identity(m0(8)));
  CHECK(d.gamma[0][0] == cr(1, "1", kExact));
  CHECK(d.eta[0].is_zero());
  CHECK(d.xi == cr(1, "1", kExact));
  CHECK(d.triangular);
  check_all_zero(check_identities(HoloMap::identity(m0(8))));
}

TEST_CASE("square map into its target has xi = 2") {
  const HoloMap f = power_map(m0(8), power_map_target(2, 8), 2);
  const MapFrameData d = frame_data(f);
  CHECK(d.xi == cr(1, "2", kExact));
  CHECK(d.gamma[0][0] == cr(1, "1", kExact));
  CHECK(d.eta[0].is_zero());
  CHECK(d.triangular);
  const ResidualReport rep = check_identities(f);
  check_all_zero(rep);
  // At the origin the transfer reads 2 * 1 = 1 * 1 * 2.
  const Desingularized dt = desingularize(build_frame(f.target()), levi_matrix(build_frame(f.target())), 1);
  CHECK(dt.h0[0][0].constant_term() == GaussRational(2));
}

TEST_CASE("rotation is an automorphism with constant gamma") {
  const SpacePtr hs = VarSpace::holomorphic(1);
  const HoloMap f({lit(hs, "(3/5+4/5*i)*z1"), lit(hs, "w")}, m0(8), m0(8));
  CHECK(maps_into(f).is_zero());
  const MapFrameData d = frame_data(f);
  CHECK(d.gamma[0][0] == lit(VarSpace::cr(1), "3/5+4/5*i"));
  check_all_zero(check_identities(f));
}

TEST_CASE("shear map has nonzero eta and satisfies every identity") {
  const int trunc = 8;
  const SpacePtr hs = VarSpace::holomorphic(1);
  const HoloMap f({lit(hs, "z1 + z1*w"), lit(hs, "w")}, m0(trunc), shear_image(trunc));
  CHECK(maps_into(f).is_zero());
  const MapFrameData d = frame_data(f);
  CHECK_FALSE(d.eta[0].is_zero());
  CHECK(d.triangular);
  const ResidualReport rep = check_identities(f);
  check_all_zero(rep);
  // The opposite-sign forms do not hold once eta is nonzero.
  bool alt_nonzero = false;
  for (const auto& r : rep.identities)
    if (r.diagnostic && !r.value.is_zero()) alt_nonzero = true;
  CHECK(alt_nonzero);
}

TEST_CASE("two-variable map with mixed gamma") {
  const Hypersurface src(cr(2, "s*z1*c1 + s*z2*c2", 6));
  const SpacePtr hs = VarSpace::holomorphic(2);
  // Unitary mixing of z1, z2 preserves |z1|^2 + |z2|^2.
  const HoloMap f({lit(hs, "3/5*z1 - 4/5*z2"), lit(hs, "4/5*z1 + 3/5*z2"), lit(hs, "w")}, src, src);
  CHECK(maps_into(f).is_zero());
  check_all_zero(check_identities(f));
}

TEST_CASE("xi and gamma compose") {
  const int trunc = 8;
  const SpacePtr hs = VarSpace::holomorphic(1);
  const HoloMap g({lit(hs, "(3/5+4/5*i)*z1"), lit(hs, "w")}, m0(trunc), m0(trunc));
  const HoloMap f = power_map(m0(trunc), power_map_target(2, trunc), 2);
  const HoloMap fg = compose(f, g);
  const MapFrameData dg = frame_data(g), df = frame_data(f), dfg = frame_data(fg);
  const RestrictedMap rg = restrict_map(g);
  const Series gamma_expected = rg.pullback(df.gamma[0][0]) * dg.gamma[0][0];
  CHECK(dfg.gamma[0][0] == gamma_expected.truncated(dfg.gamma[0][0].trunc()));
  CHECK(dfg.xi == (rg.pullback(df.xi) * dg.xi).truncated(dfg.xi.trunc()));
}

TEST_CASE("xi is multiplicative along a chain of squares") {
  const int trunc = 10;
  const HoloMap first = power_map(m0(trunc), power_map_target(2, trunc), 2);
  const HoloMap second = power_map(power_map_target(2, trunc), power_map_target(4, trunc), 2);
  CHECK(maps_into(second).is_zero());
  const HoloMap chain = compose(second, first);
  CHECK(maps_into(chain).is_zero());
  CHECK(frame_data(first).xi == cr(1, "2", kExact));
  CHECK(frame_data(second).xi == cr(1, "2", kExact));
  CHECK(frame_data(chain).xi == cr(1, "4", kExact));
}

TEST_CASE("levi-flat source is xi-singular") {
  const Hypersurface flat(cr(1, "0", 6));
  CHECK_THROWS_AS(frame_data(HoloMap::identity(flat)), XiSingularError);
  const ResidualReport rep = check_identities(HoloMap::identity(flat));
  CHECK_FALSE(rep.xi_smooth);
  CHECK_FALSE(rep.all_zero());
}

TEST_CASE("map components must fix the origin") {
  const SpacePtr hs = VarSpace::holomorphic(1);
  CHECK_THROWS_AS(HoloMap({lit(hs, "z1 + 1"), lit(hs, "w")}, m0(4), m0(4)), ValidationError);
}

}  // TEST_SUITE
