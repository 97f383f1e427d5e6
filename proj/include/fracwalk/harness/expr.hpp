/*
   Copyright 2026 The fracwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Exact evaluation of small complex-rational expressions such as
// "-(4!)/2^2", "3/2 + i" or "1e-3". Supports + - * / ^ (integer
// exponents), postfix !, parentheses, the imaginary unit i, and implicit
// multiplication ("2i", "3(1+i)").

#include <cctype>
#include <complex>
#include <stdexcept>
#include <string>

#include "fracwalk/errors.hpp"
#include "fracwalk/specialfn.hpp"

namespace fracwalk::harness {

struct ExactComplex {
    BigRational re = 0;
    BigRational im = 0;

    cplx to_cplx() const { return {re.convert_to<double>(), im.convert_to<double>()}; }
    bool is_real() const { return im == 0; }

    friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) { return {a.re + b.re, a.im + b.im}; }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) { return {a.re - b.re, a.im - b.im}; }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b)
    {
        const BigRational den = b.re * b.re + b.im * b.im;
        if (den == 0) throw ConfigError("division by zero");
        return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
    }
};

inline std::string to_string(const BigRational& q)
{
    return q.str();
}

class ExpressionParser {
public:
    explicit ExpressionParser(std::string text) : s_(std::move(text)) {}

    ExactComplex parse()
    {
        ExactComplex v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("bad expression '" + s_ + "': " + what);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek()
    {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ExactComplex expr()
    {
        ExactComplex v = term();
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                v = v + term();
            } else if (c == '-') {
                ++pos_;
                v = v - term();
            } else {
                return v;
            }
        }
    }

    ExactComplex term()
    {
        ExactComplex v = unary();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                v = v * unary();
            } else if (c == '/') {
                ++pos_;
                v = v / unary();
            } else if (c == 'i' || c == '(' || std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                v = v * power();
            } else {
                return v;
            }
        }
    }

    ExactComplex unary()
    {
        const char c = peek();
        if (c == '-') {
            ++pos_;
            return ExactComplex{} - unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    ExactComplex power()
    {
        ExactComplex base = postfix();
        if (peek() != '^') return base;
        ++pos_;
        const ExactComplex e = unary();
        if (!e.is_real() || denominator(e.re) != 1) fail("exponent must be an integer");
        const BigInt k = numerator(e.re);
        if (abs(k) > 4096) fail("exponent too large");
        long p = k.convert_to<long>();
        ExactComplex result{1, 0};
        ExactComplex b = base;
        const bool negative = p < 0;
        if (negative) p = -p;
        while (p) {
            if (p & 1) result = result * b;
            b = b * b;
            p >>= 1;
        }
        return negative ? ExactComplex{1, 0} / result : result;
    }

    ExactComplex postfix()
    {
        ExactComplex v = primary();
        while (peek() == '!') {
            ++pos_;
            if (!v.is_real() || denominator(v.re) != 1 || v.re < 0) fail("factorial needs a nonnegative integer");
            if (v.re > 400) fail("factorial argument too large");
            v = {BigRational(factorial(v.re.convert_to<unsigned>())), 0};
        }
        return v;
    }

    ExactComplex primary()
    {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            ExactComplex v = expr();
            if (peek() != ')') fail("missing ')'");
            ++pos_;
            return v;
        }
        if (c == 'i') {
            ++pos_;
            return {0, 1};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return {number(), 0};
        if (c == '\0') fail("unexpected end");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    // Decimal literal with optional exponent, converted exactly.
    BigRational number()
    {
        BigInt mant = 0;
        long scale = 0;
        bool digits = false;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            mant = mant * 10 + (s_[pos_++] - '0');
            digits = true;
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                mant = mant * 10 + (s_[pos_++] - '0');
                --scale;
                digits = true;
            }
        }
        if (!digits) fail("malformed number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            int sign = 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) {
                sign = (s_[q] == '-') ? -1 : 1;
                ++q;
            }
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                long e = 0;
                while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                    e = e * 10 + (s_[q++] - '0');
                    if (e > 400) fail("exponent too large");
                }
                scale += sign * e;
                pos_ = q;
            }
        }
        BigInt ten = 1;
        for (long j = 0; j < std::abs(scale); ++j) ten *= 10;
        return scale >= 0 ? BigRational(mant * ten) : BigRational(mant, ten);
    }

    std::string s_;
    std::size_t pos_ = 0;
};

inline ExactComplex parse_expression(const std::string& text)
{
    return ExpressionParser(text).parse();
}

} // namespace fracwalk::harness
