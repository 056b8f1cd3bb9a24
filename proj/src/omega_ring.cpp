#include "qtrace/omega_ring.hpp"

#include "qtrace/errors.hpp"

#include <cctype>
#include <ostream>

namespace qtrace {

int checked_exponent(std::int64_t e) {
    if (e > OmegaPoly::kMaxExponent || e < -OmegaPoly::kMaxExponent)
        throw OverflowError("w-exponent " + std::to_string(e) + " out of range");
    return static_cast<int>(e);
}

OmegaPoly::OmegaPoly(long c) {
    if (c != 0) terms_.emplace(0, Integer(c));
}

OmegaPoly OmegaPoly::monomial(std::int64_t exp, const Integer& coeff) {
    OmegaPoly p;
    p.add_term(exp, coeff);
    return p;
}

void OmegaPoly::add_term(std::int64_t exp, const Integer& c) {
    if (c == 0) return;
    int e = checked_exponent(exp);
    auto [it, fresh] = terms_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool OmegaPoly::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
}

int OmegaPoly::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int OmegaPoly::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

Integer OmegaPoly::coefficient(int exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? Integer(0) : it->second;
}

OmegaPoly OmegaPoly::star() const {
    OmegaPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
    return r;
}

Integer OmegaPoly::specialize_one() const {
    Integer s = 0;
    for (const auto& [e, c] : terms_) s += c;
    return s;
}

bool OmegaPoly::is_q_positive() const {
    for (const auto& [e, c] : terms_)
        if (e % 4 != 0 || c < 0) return false;
    return true;
}

OmegaPoly& OmegaPoly::operator+=(const OmegaPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

OmegaPoly& OmegaPoly::operator-=(const OmegaPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

OmegaPoly OmegaPoly::operator-() const {
    OmegaPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

OmegaPoly operator*(const OmegaPoly& a, const OmegaPoly& b) {
    OmegaPoly r;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_)
            r.add_term(std::int64_t{ea} + eb, ca * cb);
    return r;
}

OmegaPoly& OmegaPoly::operator*=(const OmegaPoly& o) {
    *this = *this * o;
    return *this;
}

OmegaPoly OmegaPoly::shifted(std::int64_t k) const {
    OmegaPoly r;
    for (const auto& [e, c] : terms_) r.add_term(std::int64_t{e} + k, c);
    return r;
}

std::string OmegaPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Integer mag = c < 0 ? Integer(-c) : c;
        if (first) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        out += mag.str() + "*w^" + std::to_string(e);
        first = false;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const OmegaPoly& p) { return os << p.to_string(); }

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at_end() {
        skip_ws();
        return i_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    std::string digits() {
        skip_ws();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected digits");
        return std::string(s_.substr(start, i_ - start));
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("omega polynomial '" + std::string(s_) + "' at offset " +
                         std::to_string(i_) + ": " + what);
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;
};

std::int64_t parse_exponent(Lexer& lx) {
    bool neg = lx.accept('-');
    std::string d = lx.digits();
    if (d.size() > 12) lx.fail("exponent too large");
    std::int64_t v = std::stoll(d);
    return neg ? -v : v;
}

}  // namespace

OmegaPoly OmegaPoly::parse(std::string_view text) {
    Lexer lx(text);
    if (lx.at_end()) lx.fail("empty input");
    OmegaPoly r;
    bool first = true;
    while (!lx.at_end()) {
        bool neg = false;
        if (first) {
            neg = lx.accept('-');
        } else if (lx.accept('-')) {
            neg = true;
        } else {
            lx.expect('+');
        }
        first = false;
        Integer coeff = 1;
        std::int64_t exp = 0;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
            coeff = Integer(lx.digits());
            have_coeff = true;
        }
        bool have_mono = false;
        if (have_coeff ? lx.accept('*') : true) {
            lx.expect('w');
            have_mono = true;
        }
        if (have_mono) exp = lx.accept('^') ? parse_exponent(lx) : 1;
        r.add_term(exp, neg ? Integer(-coeff) : coeff);
    }
    return r;
}

}  // namespace qtrace
