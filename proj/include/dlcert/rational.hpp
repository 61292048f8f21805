#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

namespace dlcert {

using Rational = mpq_class;

// Exact assignment of rationals to identifiers; used for witnesses.
using Point = std::map<std::string, Rational>;

// Parses "12", "3/4" or a decimal such as "0.125" exactly.
Rational parse_rational(const std::string& text);

// "p" for integers, "p/q" otherwise.
std::string rational_to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace dlcert
