#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace qtrace {

using Integer = boost::multiprecision::cpp_int;

// Laurent polynomial in w with integer coefficients.  q = w^4 and A = w^-2.
//
// Text grammar (whitespace between tokens is ignored):
//   poly  := "0" | term { ("+" | "-") term }
//   term  := ["-"] coeff ["*" mono] | ["-"] mono
//   mono  := "w" ["^" ["-"] digits]
//   coeff := digits
// Like terms are combined when parsing.  Output always uses `c*w^k` terms in
// increasing exponent order, e.g. `3*w^-5 + 1*w^0 - 2*w^4`.
class OmegaPoly {
public:
    static constexpr std::int64_t kMaxExponent = (std::int64_t{1} << 31) - 1;

    OmegaPoly() = default;
    OmegaPoly(long c);  // NOLINT: implicit constant

    static OmegaPoly monomial(std::int64_t exp, const Integer& coeff = 1);
    static OmegaPoly omega(std::int64_t exp) { return monomial(exp, 1); }
    static OmegaPoly q(std::int64_t k) { return omega(4 * k); }
    static OmegaPoly A(std::int64_t k) { return omega(-2 * k); }
    static OmegaPoly parse(std::string_view text);

    const std::map<int, Integer>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    // Single term c*w^k?
    bool is_monomial() const { return terms_.size() == 1; }
    int min_exponent() const;
    int max_exponent() const;
    Integer coefficient(int exp) const;

    OmegaPoly star() const;
    Integer specialize_one() const;
    bool is_q_positive() const;

    std::string to_string() const;

    OmegaPoly& operator+=(const OmegaPoly& o);
    OmegaPoly& operator-=(const OmegaPoly& o);
    OmegaPoly& operator*=(const OmegaPoly& o);
    OmegaPoly operator-() const;

    friend OmegaPoly operator+(OmegaPoly a, const OmegaPoly& b) { return a += b; }
    friend OmegaPoly operator-(OmegaPoly a, const OmegaPoly& b) { return a -= b; }
    friend OmegaPoly operator*(const OmegaPoly& a, const OmegaPoly& b);
    friend bool operator==(const OmegaPoly& a, const OmegaPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const OmegaPoly& a, const OmegaPoly& b) { return !(a == b); }

    // Multiply by w^k.
    OmegaPoly shifted(std::int64_t k) const;

private:
    void add_term(std::int64_t exp, const Integer& c);
    std::map<int, Integer> terms_;
};

int checked_exponent(std::int64_t e);

inline OmegaPoly multiply(const OmegaPoly& a, const OmegaPoly& b) { return a * b; }
inline OmegaPoly star(const OmegaPoly& a) { return a.star(); }
inline Integer specialize_one(const OmegaPoly& a) { return a.specialize_one(); }
inline bool is_q_positive(const OmegaPoly& a) { return a.is_q_positive(); }

std::ostream& operator<<(std::ostream& os, const OmegaPoly& p);

}  // namespace qtrace
