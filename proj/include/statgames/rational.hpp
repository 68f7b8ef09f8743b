#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace statgames {

// Exact arithmetic backbone for the finite-game computations. Equilibrium
// parameters of finite guessing games are rational numbers, and the Nash
// certificates require exact equality checks, so everything finite runs on
// arbitrary-precision rationals; limits and asymptotics use binary64.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// C(n, k) computed with the multiplicative formula (every division is exact).
BigInt binomial(std::int64_t n, std::int64_t k);

double to_double(const Rational& r);

// "p/q" in lowest terms ("p" when q == 1); used by reports and certificates.
std::string to_fraction_string(const Rational& r);

} // namespace statgames
