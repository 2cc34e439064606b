#pragma once

#include <cstddef>
#include <string_view>

#include "crsing/series.hpp"

namespace crs {

/// Parses a series literal such as `3/2*z1^2*c1*s - (1/2+1/3*i)*z2`.
///
/// Grammar (whitespace-insensitive):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' integer)?
///   primary := integer | 'i' | variable | '(' expr ')'
///
/// Divisors must be nonzero constants.  Variables must belong to `space`.
/// Errors are reported as ParseError with positions offset by
/// (`line`, `column`), the location of the literal inside its file.
Series parse_series(std::string_view text, SpacePtr space, int trunc, std::size_t line = 1,
                    std::size_t column = 1);

/// Parses a rational or Gaussian-rational constant using the same grammar.
GaussRational parse_constant(std::string_view text, std::size_t line = 1, std::size_t column = 1);

}  // namespace crs
