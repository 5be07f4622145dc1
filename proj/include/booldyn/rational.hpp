#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace booldyn {

// Exact rational scalar used throughout the word calculus. Arbitrary precision:
// elimination chains must never overflow or round.
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& q) {
    return q.str();
}

inline bool is_integer(const Rational& q) {
    return denominator(q) == 1;
}

} // namespace booldyn
