#include "statgames/rational.hpp"

#include "statgames/errors.hpp"

namespace statgames {

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0) throw DomainError("binomial: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i; // exact: result holds C(n-k+i, i) after this step
    }
    return result;
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string to_fraction_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace statgames
