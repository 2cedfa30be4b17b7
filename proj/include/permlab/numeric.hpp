#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace permlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// C(n, k); zero outside the Pascal triangle (negative or k > n).
inline BigInt binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt b = 1;
    for (long long i = 1; i <= k; ++i) {
        b *= n - k + i;
        b /= i;  // always exact at this point
    }
    return b;
}

// Exact division; throws if a remainder is left (signals formula misuse).
inline BigInt exact_div(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("exact_div: zero divisor");
    BigInt q = num / den;
    if (q * den != num)
        throw std::domain_error("exact_div: remainder in exact division");
    return q;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace permlab
