/*
 * Copyright 2026 The mschelling Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "mschelling/error.hpp"

namespace mschelling {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always held in lowest terms with a positive denominator.
class Fraction {
public:
    using Rational = boost::multiprecision::cpp_rational;

    Fraction() = default;
    Fraction(std::int64_t value) : value_(value) {} // NOLINT: implicit by design of arithmetic use
    Fraction(std::int64_t num, std::int64_t den) : Fraction(BigInt(num), BigInt(den)) {}
    Fraction(const BigInt& num, const BigInt& den)
    {
        if (den == 0) {
            throw InputError("fraction with zero denominator");
        }
        // cpp_rational rejects negative denominators
        value_ = den < 0 ? Rational(-num, -den) : Rational(num, den);
    }

    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }

    bool is_zero() const { return value_ == 0; }
    int sign() const { return value_.sign(); }

    Fraction& operator+=(const Fraction& o) { value_ += o.value_; return *this; }
    Fraction& operator-=(const Fraction& o) { value_ -= o.value_; return *this; }
    Fraction& operator*=(const Fraction& o) { value_ *= o.value_; return *this; }
    Fraction& operator/=(const Fraction& o)
    {
        if (o.value_ == 0) {
            throw InputError("division by zero fraction");
        }
        value_ /= o.value_;
        return *this;
    }

    friend Fraction operator+(Fraction a, const Fraction& b) { return a += b; }
    friend Fraction operator-(Fraction a, const Fraction& b) { return a -= b; }
    friend Fraction operator*(Fraction a, const Fraction& b) { return a *= b; }
    friend Fraction operator/(Fraction a, const Fraction& b) { return a /= b; }
    friend Fraction operator-(Fraction a) { a.value_ = -a.value_; return a; }

    friend bool operator==(const Fraction& a, const Fraction& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b)
    {
        const int c = a.value_.compare(b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// Canonical "p/q" form; the denominator is always written, even when it is 1.
    std::string to_string() const
    {
        return numerator().str() + "/" + denominator().str();
    }

    /// Accepts "p/q" or a bare integer "p"; surrounding whitespace is not allowed.
    static Fraction parse(std::string_view text)
    {
        const auto slash = text.find('/');
        const std::string_view num = text.substr(0, slash);
        const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
        if (!is_integer_literal(num) || !is_integer_literal(den)) {
            throw InputError("malformed fraction '" + std::string(text) + "'");
        }
        return Fraction(BigInt(std::string(num)), BigInt(std::string(den)));
    }

    /// Rounded decimal with a fixed number of places. Display only.
    std::string to_decimal(int places = 6) const
    {
        BigInt scale = 1;
        for (int i = 0; i < places; ++i) {
            scale *= 10;
        }
        BigInt num = numerator();
        const BigInt den = denominator();
        const bool negative = num < 0;
        if (negative) {
            num = -num;
        }
        BigInt scaled = (num * scale * 2 + den) / (den * 2);
        const BigInt whole = scaled / scale;
        std::string out = (negative && scaled != 0 ? "-" : "") + whole.str();
        if (places > 0) {
            std::string frac = BigInt(scaled % scale).str();
            frac.insert(frac.begin(), static_cast<std::size_t>(places) - frac.size(), '0');
            out += "." + frac;
        }
        return out;
    }

    double to_double() const { return value_.convert_to<double>(); }

    const Rational& raw() const { return value_; }

private:
    static bool is_integer_literal(std::string_view s)
    {
        if (!s.empty() && s.front() == '-') {
            s.remove_prefix(1);
        }
        if (s.empty()) {
            return false;
        }
        for (char c : s) {
            if (c < '0' || c > '9') {
                return false;
            }
        }
        return true;
    }

    Rational value_ {0};
};

inline std::ostream& operator<<(std::ostream& os, const Fraction& f)
{
    return os << f.to_string();
}

} // namespace mschelling
