#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crsing/gauss_rational.hpp"

namespace crs {

/// Ordered list of variable names, optionally with an involutive pairing used
/// by conjugation (z_A <-> c_A in the CR coordinate space).
class VarSpace {
 public:
  VarSpace(std::vector<std::string> names, std::vector<std::size_t> conj_pairing = {});

  /// z1..zn, c1..cn, s.  Conjugation swaps z_A and c_A and fixes s.
  static std::shared_ptr<const VarSpace> cr(int n);
  /// z1..zn, w: holomorphic map variables.
  static std::shared_ptr<const VarSpace> holomorphic(int n);
  /// t, y1..yN.
  static std::shared_ptr<const VarSpace> briot_bouquet(int dim);
  static std::shared_ptr<const VarSpace> univariate(std::string name);
  static std::shared_ptr<const VarSpace> make(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool has_conjugation() const noexcept { return !conj_.empty(); }
  std::size_t conjugate_index(std::size_t i) const { return conj_.at(i); }

  /// CR dimension n when this is a CR coordinate space, otherwise 0.
  int cr_dim() const noexcept { return cr_dim_; }
  /// Index helpers for CR spaces.
  std::size_t z(int a) const { return static_cast<std::size_t>(a); }
  std::size_t c(int a) const { return static_cast<std::size_t>(cr_dim_ + a); }
  std::size_t s() const { return static_cast<std::size_t>(2 * cr_dim_); }

  friend bool operator==(const VarSpace& a, const VarSpace& b) {
    return a.names_ == b.names_ && a.conj_ == b.conj_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> conj_;
  int cr_dim_ = 0;
};

using SpacePtr = std::shared_ptr<const VarSpace>;

using Exponent = std::vector<std::uint16_t>;

int total_degree(const Exponent& e);

/// Truncation order that stands for "exact polynomial".
inline constexpr int kExact = std::numeric_limits<int>::max() / 4;

/// Sparse multivariate power series over Q(i), known modulo monomials of
/// total degree > trunc().  Values are immutable in practice; every operation
/// returns a new series.  Terms are ordered lexicographically by exponent.
class Series {
 public:
  using TermMap = std::map<Exponent, GaussRational>;

  Series(SpacePtr space, int trunc);

  static Series constant(SpacePtr space, int trunc, const GaussRational& value);
  static Series variable(SpacePtr space, int trunc, std::size_t index);
  static Series monomial(SpacePtr space, int trunc, Exponent exp, const GaussRational& coef);

  const SpacePtr& space() const noexcept { return space_; }
  int trunc() const noexcept { return trunc_; }
  bool is_exact() const noexcept { return trunc_ >= kExact; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  GaussRational coefficient(const Exponent& e) const;
  GaussRational constant_term() const;
  /// Lower bound on the degree of the true series: least stored degree, or
  /// trunc()+1 when nothing is stored.
  int valuation() const;
  /// Largest stored degree, -1 for zero.
  int degree() const;
  /// Least exponent of variable `var` among stored terms (-1 if zero).
  int min_exponent(std::size_t var) const;

  /// Adds `coef` to the coefficient of `e`, dropping it if above the truncation.
  void add_term(const Exponent& e, const GaussRational& coef);

  Series truncated(int n) const;
  Series with_space(SpacePtr space) const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(const GaussRational& c);
  Series operator-() const;

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator*(Series a, const GaussRational& c) { return a *= c; }
  friend Series operator*(const GaussRational& c, Series a) { return a *= c; }

  /// Structural equality of term maps; truncation orders are not compared.
  friend bool operator==(const Series& a, const Series& b);
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

  /// Series literal in canonical order (by degree, then by variable order),
  /// re-parseable by parse_series.
  std::string to_string() const;

 private:
  SpacePtr space_;
  int trunc_;
  TermMap terms_;
};

void require_same_space(const Series& a, const Series& b);

Series multiply(const Series& a, const Series& b);
Series pow(const Series& a, unsigned k);
Series partial_derivative(const Series& a, std::size_t var);
Series conjugate(const Series& a);
bool is_real(const Series& a);
Series real_part(const Series& a);
Series imag_part(const Series& a);

/// Inverse of a series with nonzero constant term (ArithmeticError otherwise).
/// Exact inputs are inverted to order `exact_trunc`.
Series reciprocal(const Series& a, int exact_trunc = -1);

/// Divides by var^k; every stored term must carry var^k
/// (ArithmeticError naming the offending monomial otherwise).
Series divide_by_var_power(const Series& a, std::size_t var, int k);
/// divide_by_var_power on the s coordinate of a CR space.
Series divide_by_s_power(const Series& a, int m);

/// Substitutes images[i] for variable i of a.  Images live in a common target
/// space and must have zero constant term.  The result is exact through
/// min(min_i trunc(images[i]), (trunc(a)+1)*v - 1), v the least image valuation.
Series substitute(const Series& a, std::span<const Series> images);

/// outer(inner) for a univariate outer series and inner with zero constant term.
Series compose(const Series& outer, const Series& inner);

/// Replaces the variables listed in `values` by rational constants and
/// removes them from the space.  `a` must be polynomial in those variables
/// below its truncation; the truncation order is kept.
Series specialize(const Series& a, const std::map<std::size_t, GaussRational>& values,
                  SpacePtr target);

/// Coefficient series of var^k: terms of `a` carrying exactly var^k, with
/// that factor removed; truncation reduced by k.
Series coefficient_of_power(const Series& a, std::size_t var, int k);

/// Unique solution t(params) with t(0)=0 of t = G(params, t), where t is the
/// last variable of G's space.  Requires G(0)=0 and dG/dt(0)=0.  The result
/// lives in the space of the remaining variables.
Series implicit_solve(const Series& g, SpacePtr param_space);

/// arctan(u) as a univariate series through degree `order`, obtained by
/// integrating 1/(1+u^2).
Series arctan_series(SpacePtr univariate, int order);

}  // namespace crs
