#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <vector>

namespace invrep {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Wide float used only to funnel huge exact rationals into doubles.
using BigFloat = boost::multiprecision::cpp_bin_float_100;

inline const Int& factorial(long long n) {
    if (n < 0) throw std::invalid_argument("factorial of negative argument");
    thread_local std::vector<Int> cache{Int(1)};
    while (static_cast<long long>(cache.size()) <= n)
        cache.push_back(cache.back() * static_cast<long long>(cache.size()));
    return cache[static_cast<std::size_t>(n)];
}

inline Int binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    Int r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i; // exact at every step
    }
    return r;
}

inline double to_double(const Int& x) { return static_cast<double>(BigFloat(x)); }

inline double to_double(const Rat& q) {
    BigFloat num(boost::multiprecision::numerator(q));
    BigFloat den(boost::multiprecision::denominator(q));
    return static_cast<double>(num / den);
}

inline double sqrt_to_double(const Rat& q) {
    if (q < 0) throw std::domain_error("sqrt of negative rational");
    BigFloat num(boost::multiprecision::numerator(q));
    BigFloat den(boost::multiprecision::denominator(q));
    return static_cast<double>(sqrt(num / den));
}

// Exact value of the form sign * sqrt(mag2) with mag2 a non-negative rational.
// Products of two such values (e.g. squared CGCs) stay exactly rational.
struct SqrtRat {
    int sign = 0; // -1, 0, +1
    Rat mag2 = 0; // value^2

    double value() const { return sign == 0 ? 0.0 : sign * sqrt_to_double(mag2); }
    Rat squared() const { return mag2; }
    Rat signed_square() const { return sign < 0 ? Rat(-mag2) : mag2; }
    bool is_zero() const { return sign == 0 || mag2 == 0; }

    static SqrtRat zero() { return {0, 0}; }
    static SqrtRat from_rational(const Rat& r) {
        // exact only when used for sign bookkeeping of rational values r = sign*|r|
        SqrtRat s;
        s.sign = r == 0 ? 0 : (r < 0 ? -1 : 1);
        s.mag2 = r * r;
        return s;
    }
};

} // namespace invrep
