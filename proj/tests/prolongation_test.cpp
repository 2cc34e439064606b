#include <algorithm>
#include <cmath>
#include <random>

#include "crsing/errors.hpp"
#include "crsing/prolongation.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crs;
using crs::testing::lit;

namespace {

int count_kind(const JetSpace& js, ContactEquation::Kind k) {
  return static_cast<int>(std::count_if(js.contact().begin(), js.contact().end(),
                                        [k](const ContactEquation& c) { return c.kind == k; }));
}

// Jet u^{alpha,p} = (s d/ds)^p d_x^alpha u of an explicit u(x1..x2n, s).
Series jet_of(const Series& u, const JetSlot& slot) {
  Series out = u;
  const std::size_t s = u.space()->size() - 1;
  for (std::size_t j = 0; j < slot.alpha.size(); ++j)
    for (int r = 0; r < slot.alpha[j]; ++r) out = partial_derivative(out, j);
  for (int r = 0; r < slot.p; ++r) out = Series::variable(u.space(), kExact, s) * partial_derivative(out, s);
  return out;
}

Series euler(const Series& a) {
  const std::size_t s = a.space()->size() - 1;
  return Series::variable(a.space(), kExact, s) * partial_derivative(a, s);
}

ProlongedSystem toy(const JetSpace& js, std::vector<const char*> closure, std::vector<std::vector<GaussRational>> x,
                    int order) {
  std::vector<Series> r;
  for (const char* c : closure) r.push_back(lit(js.closure_space(), c));
  return ProlongedSystem{js, std::move(r), std::move(x), {}, order};
}

}  // namespace

TEST_SUITE("prolongation") {

TEST_CASE("slot counts for n = 1, k = 3") {
  const JetSpace top = contact_prolong(1, 3, SlotPolicy::TopOrder);
  CHECK(top.components() == 3);
  CHECK(top.slots().size() == 20);
  CHECK(top.variables().size() == 60);
  CHECK(top.contact().size() == 30);
  CHECK(top.closure_slots().size() == 30);
  CHECK(count_kind(top, ContactEquation::Kind::XTransport) == 0);

  const JetSpace pure = contact_prolong(1, 3);
  CHECK(pure.variables().size() == 60);
  CHECK(pure.contact().size() == 57);
  CHECK(pure.closure_slots().size() == 3);
  CHECK(count_kind(pure, ContactEquation::Kind::Chain) == 30);
  CHECK(count_kind(pure, ContactEquation::Kind::XTransport) == 27);
  for (int v : pure.closure_slots()) {
    const auto& slot = pure.variables()[v].slot;
    CHECK(slot.p == 3);
    CHECK(slot.order() == 3);
  }
}

TEST_CASE("slot counts against binomials") {
  // C(2n + 1 + k, k) slots of order <= k, C(2n + k, k) of order exactly k
  auto binom = [](int a, int b) {
    long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return static_cast<int>(r);
  };
  for (int n = 1; n <= 2; ++n)
    for (int k = 0; k <= 3; ++k) {
      const JetSpace js = contact_prolong(n, k, SlotPolicy::TopOrder, 2);
      CHECK(static_cast<int>(js.slots().size()) == binom(2 * n + 1 + k, k));
      CHECK(static_cast<int>(js.closure_slots().size()) == 2 * binom(2 * n + k, k));
    }
}

TEST_CASE("ordering is graded then lexicographically decreasing") {
  const JetSpace js = contact_prolong(1, 2, SlotPolicy::TopOrder, 1);
  const auto& sl = js.slots();
  REQUIRE(sl.size() == 10);
  CHECK(sl[0] == JetSlot{{0, 0}, 0});
  CHECK(sl[1] == JetSlot{{1, 0}, 0});
  CHECK(sl[2] == JetSlot{{0, 1}, 0});
  CHECK(sl[3] == JetSlot{{0, 0}, 1});
  CHECK(sl[4] == JetSlot{{2, 0}, 0});
  CHECK(sl[9] == JetSlot{{0, 0}, 2});
  CHECK(js.variables()[3].name == "u1_0_0_1");
  const JetSpace three = contact_prolong(1, 1);
  CHECK(three.variables()[4].name == "u2_1_0_0");
  CHECK(*three.index_of(1, JetSlot{{1, 0}, 0}) == 4);
  CHECK_FALSE(three.index_of(0, JetSlot{{1, 1}, 0}).has_value());
}

TEST_CASE("contact equations hold on jets of a polynomial") {
  std::mt19937 rng(7);
  const SpacePtr sp = VarSpace::make({"x1", "x2", "s"});
  for (int trial = 0; trial < 5; ++trial) {
    Series ue(sp, kExact);
    const Series u = crs::testing::random_series(rng, sp, 6, 8);
    for (const auto& [e, c] : u.terms()) ue.add_term(e, c);
    for (auto policy : {SlotPolicy::TopOrder, SlotPolicy::PureS}) {
      const JetSpace js = contact_prolong(1, 3, policy, 1);
      for (const auto& ce : js.contact()) {
        const Series lhs = euler(jet_of(ue, js.variables()[ce.lhs].slot));
        Series rhs = jet_of(ue, js.variables()[ce.rhs].slot);
        if (ce.kind == ContactEquation::Kind::XTransport) rhs = partial_derivative(rhs, ce.x_direction);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("scalar toy closure solves to u = -s") {
  const JetSpace js = contact_prolong(1, 0, SlotPolicy::TopOrder, 1);
  const auto res = assemble_and_solve(toy(js, {"2*u1_0_0_0 + s"}, {{0, 0}}, 6));
  REQUIRE(res.samples.size() == 1);
  const auto& sol = res.samples[0].solution;
  CHECK(sol.residual_zero);
  CHECK(sol.coefficient(1) == Vector{-1});
  for (int k = 2; k <= 6; ++k) CHECK(sol.coefficient(k) == Vector{0});
  CHECK_FALSE(sol.has_logs());
}

TEST_CASE("frozen samples follow the x dependence") {
  const JetSpace js = contact_prolong(1, 0, SlotPolicy::TopOrder, 1);
  const auto res = assemble_and_solve(toy(js, {"2*u1_0_0_0 + x1*s + x2*s^2"}, {{1, 0}, {3, 2}}, 4));
  REQUIRE(res.samples.size() == 2);
  // (1 - 2) c1 = x1, (2 - 2) c2 = x2 resonant at k = 2
  CHECK(res.samples[0].solution.coefficient(1) == Vector{-1});
  CHECK_FALSE(res.samples[0].solution.has_logs());
  CHECK(res.samples[1].solution.coefficient(1) == Vector{-3});
  CHECK(res.samples[1].solution.coefficient(2, 1) == Vector{2});
  CHECK(res.samples[1].solution.residual_zero);
}

TEST_CASE("centering at a base value") {
  const JetSpace js = contact_prolong(1, 0, SlotPolicy::TopOrder, 1);
  ProlongedSystem ps = toy(js, {"2*u1_0_0_0 - 10 + s"}, {{0, 0}}, 3);
  CHECK_THROWS_AS(assemble_and_solve(ps), ValidationError);
  ps.base = {GaussRational(5)};
  const auto res = assemble_and_solve(ps);
  CHECK(res.samples[0].solution.coefficient(1) == Vector{-1});

  ProlongedSystem truncated = ps;
  truncated.closure = {lit(js.closure_space(), "2*u1_0_0_0 - 10 + s", 5)};
  CHECK_THROWS_AS(assemble_and_solve(truncated), ValidationError);
}

TEST_CASE("pure-s chain with an x-dependent closure") {
  const JetSpace js = contact_prolong(1, 1, SlotPolicy::PureS, 1);
  REQUIRE(js.closure_slots().size() == 1);
  const auto res = assemble_and_solve(toy(js, {"x1*s"}, {{2, 0}}, 4));
  REQUIRE(res.solved.size() == 2);
  CHECK(js.variables()[res.solved[0]].name == "u1_0_0_0");
  CHECK(js.variables()[res.solved[1]].name == "u1_0_0_1");
  const auto& sol = res.samples[0].solution;
  // u = x1 s exactly: u^{0,0} = u^{0,1} = 2 s
  CHECK(sol.coefficient(1) == Vector{2, 2});
  for (int k = 2; k <= 4; ++k) CHECK(sol.coefficient(k) == Vector{0, 0});

  CHECK_THROWS_AS(assemble_and_solve(toy(js, {"u1_1_0_0 + s"}, {{0, 0}}, 4)), ValidationError);
}

TEST_CASE("top-order system on all slots") {
  const JetSpace js = contact_prolong(1, 1, SlotPolicy::TopOrder, 1);
  // u = x1 s + s^2 / 2 up to the frozen closures
  const auto res = assemble_and_solve(toy(js, {"s", "0", "s + 2*s^2"}, {{1, 1}}, 5));
  REQUIRE(res.solved.size() == 4);
  const auto& sol = res.samples[0].solution;
  CHECK(sol.residual_zero);
  CHECK(sol.coefficient(1) == Vector{1, 1, 0, 1});
  CHECK(sol.coefficient(2) == Vector{GaussRational(1, 2), 0, 0, 1});
  // polynomial solution: no upper coefficients to estimate from
  CHECK_FALSE(res.samples[0].radius_proxy.has_value());
}

TEST_CASE("radius proxy from coefficient growth") {
  const JetSpace js = contact_prolong(1, 0, SlotPolicy::TopOrder, 1);
  const int order = 8;
  const auto res = assemble_and_solve(toy(js, {"-u1_0_0_0 + s + 4*s*u1_0_0_0"}, {{0, 0}}, order));
  // (k + 1) c_k = 4 c_{k-1}, c_1 = 1/2
  std::vector<double> c(order + 1, 0.0);
  c[1] = 0.5;
  for (int k = 2; k <= order; ++k) c[k] = 4 * c[k - 1] / (k + 1);
  double expect = 1e300;
  for (int j = (order + 1) / 2; j <= order; ++j) expect = std::min(expect, std::pow(c[j], -1.0 / j));
  const auto& out = res.samples[0];
  for (int j = 1; j <= order; ++j) CHECK(out.coefficient_norms[j - 1] == doctest::Approx(c[j]));
  REQUIRE(out.radius_proxy.has_value());
  CHECK(*out.radius_proxy == doctest::Approx(expect));
}

TEST_CASE("shape and validation errors") {
  const JetSpace js = contact_prolong(1, 0, SlotPolicy::TopOrder, 1);
  CHECK_THROWS_AS(assemble_and_solve(toy(js, {}, {{0, 0}}, 3)), ShapeError);
  CHECK_THROWS_AS(assemble_and_solve(toy(js, {"s"}, {}, 3)), ValidationError);
  CHECK_THROWS_AS(assemble_and_solve(toy(js, {"s"}, {{0}}, 3)), ShapeError);
  CHECK_THROWS_AS(assemble_and_solve(toy(js, {"s"}, {{0, 0}}, 0)), ValidationError);
  CHECK_THROWS_AS(contact_prolong(0, 1), ValidationError);
  CHECK_THROWS_AS(contact_prolong(1, -1), ValidationError);
  CHECK(slot_policy_from_string("pure-s") == SlotPolicy::PureS);
  CHECK_FALSE(slot_policy_from_string("mixed").has_value());
}

}
