// Copyright 2026 The bgprog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bgp/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "bgp/errors.hpp"

namespace bgp {

IntPolynomial::IntPolynomial(std::size_t variables) : variables_(variables) {
    if (variables == 0) throw DomainError("polynomial needs at least one variable");
}

IntPolynomial IntPolynomial::constant(const Integer& c, std::size_t variables) {
    IntPolynomial out(variables);
    out.add_term(Exponents(variables, 0), c);
    return out;
}

IntPolynomial IntPolynomial::variable(std::size_t index, std::size_t variables) {
    if (index >= variables) throw DomainError("variable index out of range");
    IntPolynomial out(variables);
    Exponents e(variables, 0);
    e[index] = 1;
    out.add_term(e, 1);
    return out;
}

IntPolynomial IntPolynomial::from_coefficients(std::span<const Integer> coefficients) {
    IntPolynomial out(1);
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        out.add_term({static_cast<unsigned>(i)}, coefficients[i]);
    }
    return out;
}

void IntPolynomial::add_term(const Exponents& exponents, const Integer& coefficient) {
    if (exponents.size() != variables_) throw DomainError("exponent vector dimension mismatch");
    if (coefficient == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponents, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) terms_.erase(it);
    }
}

unsigned IntPolynomial::degree() const {
    unsigned best = 0;
    for (const auto& [e, c] : terms_) {
        unsigned total = 0;
        for (unsigned v : e) total += v;
        best = std::max(best, total);
    }
    return best;
}

bool IntPolynomial::is_constant() const { return degree() == 0; }

Integer IntPolynomial::constant_term() const {
    auto it = terms_.find(Exponents(variables_, 0));
    return it == terms_.end() ? Integer(0) : it->second;
}

Integer IntPolynomial::content() const {
    Integer g = 0;
    for (const auto& [e, c] : terms_) g = gcd(g, c);
    return g;
}

Integer IntPolynomial::evaluate(std::span<const Integer> point) const {
    if (point.size() != variables_) throw DomainError("evaluation point dimension mismatch");
    Integer total = 0, power;
    for (const auto& [e, c] : terms_) {
        Integer term = c;
        for (std::size_t i = 0; i < variables_; ++i) {
            if (e[i] == 0) continue;
            mpz_pow_ui(power.get_mpz_t(), point[i].get_mpz_t(), e[i]);
            term *= power;
        }
        total += term;
    }
    return total;
}

Integer IntPolynomial::operator()(const Integer& y) const {
    return evaluate(std::span<const Integer>(&y, 1));
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& other) const {
    if (other.variables_ != variables_) throw DomainError("polynomial dimension mismatch");
    IntPolynomial out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, c);
    return out;
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& other) const {
    return *this + other * Integer(-1);
}

IntPolynomial IntPolynomial::operator*(const Integer& scalar) const {
    IntPolynomial out(variables_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * scalar);
    return out;
}

IntPolynomial IntPolynomial::operator+(const Integer& scalar) const {
    return *this + constant(scalar, variables_);
}

std::string IntPolynomial::to_string(std::string_view names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Highest degree first reads naturally for univariate output.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Integer mag = abs(c);
        if (first) {
            if (c < 0) out << '-';
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool constant = std::all_of(e.begin(), e.end(), [](unsigned v) { return v == 0; });
        bool wrote = false;
        if (mag != 1 || constant) {
            out << mag.get_str();
            wrote = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (wrote) out << '*';
            out << (i < names.size() ? names[i] : 'x');
            if (e[i] > 1) out << '^' << e[i];
            wrote = true;
        }
    }
    return out.str();
}

ModPPolynomial::ModPPolynomial(std::uint64_t p, std::size_t variables)
    : p_(p), variables_(variables) {
    if (p < 2) throw DomainError("modulus must be a prime >= 2");
}

ModPPolynomial ModPPolynomial::reduce(const IntPolynomial& poly, std::uint64_t p) {
    ModPPolynomial out(p, poly.variables());
    for (const auto& [e, c] : poly.terms()) {
        std::uint64_t r = residue(c, p);
        if (r != 0) out.terms_.emplace(e, r);
    }
    return out;
}

ModPPolynomial ModPPolynomial::from_dense(std::uint64_t p,
                                          std::span<const std::uint64_t> coefficients) {
    ModPPolynomial out(p, 1);
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        std::uint64_t r = coefficients[i] % p;
        if (r != 0) out.terms_.emplace(Exponents{static_cast<unsigned>(i)}, r);
    }
    return out;
}

int ModPPolynomial::degree() const {
    int best = -1;
    for (const auto& [e, c] : terms_) {
        int total = 0;
        for (unsigned v : e) total += static_cast<int>(v);
        best = std::max(best, total);
    }
    return best;
}

IntPolynomial ModPPolynomial::lift() const {
    IntPolynomial out(variables_);
    for (const auto& [e, c] : terms_) out.add_term(e, Integer(static_cast<unsigned long>(c)));
    return out;
}

std::vector<std::uint64_t> ModPPolynomial::dense() const {
    if (variables_ != 1) throw DomainError("dense form requires a univariate polynomial");
    std::vector<std::uint64_t> out(static_cast<std::size_t>(std::max(degree(), 0)) + 1, 0);
    for (const auto& [e, c] : terms_) out[e[0]] = c;
    return out;
}

std::uint64_t ModPPolynomial::evaluate(std::span<const std::uint64_t> point) const {
    if (point.size() != variables_) throw DomainError("evaluation point dimension mismatch");
    std::uint64_t total = 0;
    for (const auto& [e, c] : terms_) {
        std::uint64_t term = c;
        for (std::size_t i = 0; i < variables_; ++i) {
            if (e[i] != 0) term = mul_mod(term, pow_mod(point[i], e[i], p_), p_);
        }
        total = (total + term) % p_;
    }
    return total;
}

namespace {

using Dense = std::vector<std::uint64_t>;

void trim(Dense& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod b in F_p[x]; b non-zero and trimmed.
Dense poly_mod(Dense a, const Dense& b, std::uint64_t p) {
    trim(a);
    const std::uint64_t lead_inv = inverse_mod(b.back(), p);
    while (a.size() >= b.size()) {
        const std::uint64_t factor = mul_mod(a.back(), lead_inv, p);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            a[shift + i] = (a[shift + i] + p - mul_mod(factor, b[i], p)) % p;
        }
        trim(a);
    }
    return a;
}

}  // namespace

ModPPolynomial mod_p_gcd(const ModPPolynomial& a, const ModPPolynomial& b) {
    if (a.prime() != b.prime()) throw DomainError("gcd operands over different primes");
    if (a.variables() != 1 || b.variables() != 1) {
        throw DomainError("mod_p_gcd supports univariate polynomials only");
    }
    const std::uint64_t p = a.prime();
    Dense x = a.is_zero() ? Dense{} : a.dense();
    Dense y = b.is_zero() ? Dense{} : b.dense();
    trim(x);
    trim(y);
    while (!y.empty()) {
        Dense r = poly_mod(x, y, p);
        x = std::move(y);
        y = std::move(r);
    }
    if (x.empty()) return ModPPolynomial(p, 1);
    const std::uint64_t lead_inv = inverse_mod(x.back(), p);
    for (auto& c : x) c = mul_mod(c, lead_inv, p);
    return ModPPolynomial::from_dense(p, x);
}

namespace {

class PolyParser {
  public:
    PolyParser(std::string_view text, std::string_view names) : text_(text), names_(names) {}

    IntPolynomial parse() {
        IntPolynomial out(names_.size());
        skip();
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = get() == '-';
        }
        out = out + term() * Integer(negative ? -1 : 1);
        for (skip(); pos_ < text_.size(); skip()) {
            char op = get();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            out = out + term() * Integer(op == '-' ? -1 : 1);
        }
        return out;
    }

  private:
    IntPolynomial term() {
        Integer coefficient = 1;
        Exponents e(names_.size(), 0);
        bool any = false;
        for (;;) {
            skip();
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                coefficient *= number();
            } else if (auto idx = names_.find(c); c != '\0' && idx != std::string_view::npos) {
                get();
                unsigned power = 1;
                skip();
                if (peek() == '^') {
                    get();
                    skip();
                    Integer n = number();
                    if (!n.fits_uint_p()) fail("exponent too large");
                    power = static_cast<unsigned>(n.get_ui());
                }
                e[idx] += power;
            } else {
                fail("expected a number or variable");
            }
            any = true;
            skip();
            if (peek() != '*') break;
            get();
        }
        if (!any) fail("empty term");
        IntPolynomial out(names_.size());
        out.add_term(e, coefficient);
        return out;
    }

    Integer number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) fail("expected digits");
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char get() { return text_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw DomainError("polynomial parse error at offset " + std::to_string(pos_) + " in '" +
                          std::string(text_) + "': " + what);
    }

    std::string_view text_;
    std::string_view names_;
    std::size_t pos_ = 0;
};

}  // namespace

IntPolynomial parse_polynomial(std::string_view text, std::string_view names) {
    if (names.empty()) throw DomainError("no variable names given");
    return PolyParser(text, names).parse();
}

std::vector<IntPolynomial> parse_polynomial_list(std::string_view text, std::string_view names) {
    std::vector<IntPolynomial> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = text.find(',', start);
        out.push_back(parse_polynomial(text.substr(start, comma - start), names));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace bgp
