#pragma once

#include <string>

#include "qmlab/qmpoly.hpp"

namespace qmlab {

// Polynomial literal grammar:
//   form     := ['-'] term (('+' | '-') term)*
//   term     := coeff ['*' monomial] | monomial
//   monomial := factor (['*'] factor)*
//   factor   := var ['^' uint]
//   var      := 'P' | 'Q' | 'R'
//   coeff    := uint ['/' uint]
// Adjacent factors multiply ("Q^2R" = "Q^2*R"). All terms must have one
// weight; a mixed form is rejected naming both weights. Errors carry the
// character position.
QMPoly parse_form(const std::string& text);

// Canonical rendering: terms in descending (a, b, c) order, coefficients as
// num/den, unit coefficients elided. parse_form(print_form(f)) == f.
std::string print_form(const QMPoly& f);

// Named forms accepted anywhere a form literal is: E4, E6, E8, E10, E14,
// delta, eisenstein:k (even k >= 4). Anything else is parsed as a literal.
QMPoly resolve_form(const std::string& name_or_literal);

}  // namespace qmlab
