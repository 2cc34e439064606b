#include "crsing/errors.hpp"
#include "crsing/frame.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crs;
using crs::testing::cr;

namespace {

Frame frame_of(int n, const char* phi, int trunc) { return build_frame(Hypersurface(cr(n, phi, trunc))); }

// 1/(1 + i z1 c1) through degree `order`, summed directly.
Series geometric_unit(int order) {
  const SpacePtr sp = VarSpace::cr(1);
  Series out(sp, order);
  Series power = Series::constant(sp, kExact, GaussRational(1));
  const Series u = cr(1, "-i*z1*c1", kExact);
  for (int k = 0; 2 * k <= order; ++k) {
    out += power.truncated(order);
    power = power * u;
  }
  return out;
}

}  // namespace

TEST_SUITE("frame") {

TEST_CASE("frame of s*z1*c1 matches the closed form") {
  const Frame f = frame_of(1, "s*z1*c1", 8);
  const SpacePtr sp = f.space();
  // L_1bar = d/dc1 - i s z1 / (1 + i z1 c1) d/ds
  const Series expected = cr(1, "-i*s*z1", kExact) * geometric_unit(8);
  CHECK(f.Lbar(0)[sp->s()] == expected.truncated(7));
  CHECK(f.Lbar(0)[sp->c(0)] == cr(1, "1", kExact));
  CHECK(f.L(0)[sp->s()] == conjugate(expected.truncated(7)));
}

TEST_CASE("coframe is dual to the frame") {
  for (const char* phi : {"s*z1*c1", "s^2*z1*c1 + s*z1^2*c1^2", "0"}) {
    const Frame f = frame_of(1, phi, 7);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::vector<Series> comps = f.decompose(f.vector(k));
      for (std::size_t j = 0; j < f.size(); ++j) {
        CAPTURE(phi);
        CHECK(comps[j] == Series::constant(f.space(), kExact, GaussRational(j == k ? 1 : 0)));
      }
    }
  }
  const Frame f2 = frame_of(2, "s*z1*c1 + s*z2*c2^2 + s*z2^2*c2", 6);
  for (std::size_t k = 0; k < f2.size(); ++k) {
    const std::vector<Series> comps = f2.decompose(f2.vector(k));
    for (std::size_t j = 0; j < f2.size(); ++j)
      CHECK(comps[j] == Series::constant(f2.space(), kExact, GaussRational(j == k ? 1 : 0)));
  }
}

TEST_CASE("frame at the origin is the identity") {
  const Frame f = frame_of(2, "s*z1*c1 + s^2*z2*c2 + 3*z1*c2*s + 3*z2*c1*s", 6);
  for (std::size_t k = 0; k < f.size(); ++k)
    for (std::size_t i = 0; i < f.size(); ++i) {
      // vectors are T, L_1, L_2, Lbar_1, Lbar_2; coordinates are z1, z2, c1, c2, s
      const std::size_t coord = k == 0 ? 4 : k - 1;
      CHECK(f.vector(k)[i].constant_term() == GaussRational(i == coord ? 1 : 0));
    }
}

TEST_CASE("brackets of frame vectors are multiples of T") {
  const Frame f = frame_of(2, "s*z1*c1 + s*z2*c2^2 + s*z2^2*c2", 7);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CHECK(bracket(f.L(a), f.L(b)).components() == VectorField::zero(f.space(), kExact).components());
      for (const auto& [x, y] : {std::pair{f.Lbar(a), f.L(b)}, std::pair{f.Lbar(a), f.T()}, std::pair{f.L(a), f.T()}}) {
        const std::vector<Series> comps = bracket_decompose(x, y, f);
        for (std::size_t j = 1; j < comps.size(); ++j) CHECK(comps[j].is_zero());
      }
    }
}

TEST_CASE("lie derivative of theta along L_1bar") {
  const Frame f = frame_of(1, "s*z1*c1", 8);
  const CoFrameForm d = lie_derivative(characteristic_form(f), f.Lbar(0), f);
  const Series expected = cr(1, "-i*z1", kExact) * geometric_unit(8);
  CHECK(d.on_T() == expected.truncated(d.on_T().trunc()));
  // <L theta, L_1> = -<theta, [L_1bar, L_1]> = -2i h_{1bar 1}
  const SeriesMatrix h = levi_matrix(f);
  CHECK(d.pairings[Frame::index_L(0)] == h[0][0] * (GaussRational(-2) * GaussRational::i()));
  CHECK(iterated_h(f, {0}, std::nullopt) == d.on_T());
}

TEST_CASE("levi-flat frame has vanishing brackets and iterated forms") {
  const Frame f = frame_of(1, "0", 6);
  const CoFrameForm d = lie_derivative(characteristic_form(f), f.Lbar(0), f);
  for (const auto& p : d.pairings) CHECK(p.is_zero());
  CHECK(iterated_h(f, {0, 0}, 0).is_zero());
}

TEST_CASE("levi matrix is hermitian") {
  const Frame f = frame_of(2, "s*z1*c1 + s^2*z2*c2 + (1+i)*s*z1*c2 + (1-i)*s*z2*c1 + s*z1^2*c2^2 + s*z2^2*c1^2", 6);
  const SeriesMatrix h = levi_matrix(f);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(h[a][b] == conjugate(h[b][a]));
}

TEST_CASE("desingularized data of s*z1*c1") {
  const Frame f = frame_of(1, "s*z1*c1", 8);
  const Desingularized d = desingularize(f, levi_matrix(f), 1);
  CHECK(d.h0[0][0].constant_term() == GaussRational(1));
  CHECK(d.h0_bar[0].is_zero());
  const Series expected = cr(1, "-i*z1", kExact) * geometric_unit(8);
  CHECK(d.a_bar[0] == expected.truncated(d.a_bar[0].trunc()));
  CHECK_THROWS_AS(desingularize(f, levi_matrix(f), 2), InvariantViolation);
}

TEST_CASE("h0_bar equals h_bar minus a_bar") {
  for (const char* phi : {"s^2*z1*c1 + s^3*z1^2*c1^2", "s*z1*c1 + s^2*z1^2*c1 + s^2*z1*c1^2"}) {
    const Frame f = frame_of(1, phi, 8);
    const int m = *compute_infinite_type(f.surface()).m;
    const Desingularized d = desingularize(f, levi_matrix(f), m);
    const Series hbar = iterated_h(f, {0}, std::nullopt);
    CAPTURE(phi);
    const Series diff = hbar - d.a_bar[0] - d.h0_bar[0];
    CHECK(diff.is_zero());
  }
}

TEST_CASE("recursion for iterated forms holds exactly") {
  for (const char* phi : {"s*z1*c1", "s^2*z1*c1 + s*z1^2*c1^2 + s^3*z1*c1"}) {
    IteratedForms forms(std::make_shared<const Frame>(frame_of(1, phi, 8)));
    forms.extend_to(3);
    for (const Word& w : {Word{}, Word{0}, Word{0, 0}}) CHECK(recursion_residual(forms, w, 0, 0).is_zero());
  }
  IteratedForms forms2(std::make_shared<const Frame>(frame_of(2, "s*z1*c1 + s*z2*c2^2 + s*z2^2*c2", 8)));
  forms2.extend_to(3);
  for (const Word& w : {Word{}, Word{1}, Word{0, 1}})
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d) CHECK(recursion_residual(forms2, w, c, d).is_zero());
}

TEST_CASE("filtration of s*z1*c1") {
  const Filtration flt = filtration(frame_of(1, "s*z1*c1", 6), 1, 3);
  CHECK(flt.ranks == std::vector<int>{0, 1});
  CHECK(flt.ell == 1);
  CHECK(flt.nondegenerate);
  CHECK(flt.type2);
  CHECK(flt.lower_levels_vanish);
  CHECK(flt.kernel_refinement_holds);
}

TEST_CASE("filtration detects the second level") {
  const Filtration flt = filtration(frame_of(2, "s*z1*c1 + s*z2*c2^2 + s*z2^2*c2", 6), 1, 3);
  CHECK(flt.ranks == std::vector<int>{0, 1, 2});
  CHECK(flt.ell == 2);
  CHECK(flt.nondegenerate);
  CHECK(flt.lower_levels_vanish);
  CHECK(flt.kernel_refinement_holds);
}

TEST_CASE("filtration adapts a rotated basis") {
  // z1 - z2 direction is the degenerate one at the first level.
  const Filtration flt =
      filtration(frame_of(2, "s*z1*c1 + s*z1*c2 + s*z2*c1 + s*z2*c2 + s*z1^2*c1 + s*z1*c1^2", 6), 1, 3);
  CHECK(flt.ranks[1] == 1);
  CHECK(flt.lower_levels_vanish);
  CHECK(flt.kernel_refinement_holds);
}

TEST_CASE("levi-flat filtration never shrinks") {
  const Frame f = frame_of(1, "0", 6);
  // With m = 0 nothing is divided; every value vanishes.
  const Filtration flt = filtration(f, 0, 3);
  CHECK_FALSE(flt.nondegenerate);
  CHECK(flt.ranks.back() == 0);
}

TEST_CASE("filtration needs enough truncation") {
  CHECK_THROWS_AS(filtration(frame_of(1, "s*z1*c1", 4), 1, 3), TruncationError);
}

TEST_CASE("leading term equals the mixed hessian") {
  const Frame f = frame_of(2, "s*z1*c1 + s*z2^2*c2^2 + s^2*z1*c2 + s^2*z2*c1", 7);
  const LeadingTermCheck chk = check_leading_term(f, levi_matrix(f), 1);
  CHECK(chk.divisible);
  CHECK(chk.nonvanishing_on_E);
  CHECK(chk.matches_hessian);
}

}  // TEST_SUITE
