#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace invrep {

// Half-integer spin label stored as a doubled integer, so j = twice/2 exactly.
// Removes any floating-point equality on j, m labels.
struct HalfInt {
    long long twice = 0;

    constexpr HalfInt() = default;
    constexpr HalfInt(long long whole) : twice(2 * whole) {}
    static constexpr HalfInt from_twice(long long t) {
        HalfInt h;
        h.twice = t;
        return h;
    }

    constexpr bool is_integer() const { return twice % 2 == 0; }
    constexpr long long as_integer() const {
        if (!is_integer()) throw std::logic_error("HalfInt: not an integer: " + str());
        return twice / 2;
    }
    constexpr double value() const { return static_cast<double>(twice) / 2.0; }

    constexpr HalfInt operator-() const { return from_twice(-twice); }
    constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice + o.twice); }
    constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice - o.twice); }
    constexpr HalfInt& operator+=(HalfInt o) { twice += o.twice; return *this; }
    constexpr HalfInt& operator-=(HalfInt o) { twice -= o.twice; return *this; }
    friend constexpr HalfInt operator*(long long k, HalfInt h) { return from_twice(k * h.twice); }
    constexpr auto operator<=>(const HalfInt&) const = default;

    // True when m is a valid projection for this j: |m| <= j and j - m integral.
    constexpr bool admits_projection(HalfInt m) const {
        return m.twice >= -twice && m.twice <= twice && (twice - m.twice) % 2 == 0;
    }

    std::string str() const {
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }

    // Accepts "3", "-2", "3/2", "1.5", "-0.5".
    static HalfInt parse(const std::string& s) {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            long long num = std::stoll(s.substr(0, slash));
            long long den = std::stoll(s.substr(slash + 1));
            if (den == 2) return from_twice(num);
            if (den == 1) return HalfInt(num);
            throw std::invalid_argument("half-integer denominator must be 1 or 2: " + s);
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            std::string frac = s.substr(dot + 1);
            long long whole = std::stoll(s.substr(0, dot));
            bool neg = s.front() == '-';
            if (frac == "0" || frac == "00") return HalfInt(whole);
            if (frac == "5")
                return from_twice(2 * whole + (neg ? -1 : 1));
            throw std::invalid_argument("not a half-integer: " + s);
        }
        return HalfInt(std::stoll(s));
    }
};

inline constexpr HalfInt half() { return HalfInt::from_twice(1); }

} // namespace invrep
