#pragma once

#include <random>
#include <string_view>

#include "crsing/series.hpp"
#include "crsing/series_parse.hpp"

namespace crs::testing {

inline Series lit(const SpacePtr& space, std::string_view text, int trunc = kExact) {
  return parse_series(text, space, trunc);
}

inline Series cr(int n, std::string_view text, int trunc) { return parse_series(text, VarSpace::cr(n), trunc); }

/// Random series with small integer Gaussian coefficients, deterministic for a seed.
inline Series random_series(std::mt19937& rng, const SpacePtr& space, int trunc, int max_terms,
                            bool with_constant = true) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> count(0, max_terms);
  std::uniform_int_distribution<int> var(0, static_cast<int>(space->size()) - 1);
  std::uniform_int_distribution<int> deg(with_constant ? 0 : 1, trunc);
  Series out(space, trunc);
  const int terms = count(rng);
  for (int k = 0; k < terms; ++k) {
    Exponent e(space->size(), 0);
    const int d = deg(rng);
    for (int j = 0; j < d; ++j) ++e[static_cast<std::size_t>(var(rng))];
    out.add_term(e, GaussRational(mpq_class(coef(rng)), mpq_class(coef(rng))));
  }
  return out;
}

}  // namespace crs::testing
