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

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bgp/arith.hpp"

namespace bgp {

using Exponents = std::vector<unsigned>;

// Multivariate polynomial with arbitrary-precision integer coefficients.
// Zero coefficients are never stored.
class IntPolynomial {
  public:
    explicit IntPolynomial(std::size_t variables = 1);

    static IntPolynomial constant(const Integer& c, std::size_t variables = 1);
    static IntPolynomial variable(std::size_t index, std::size_t variables = 1);
    // Univariate polynomial from coefficients c0 + c1*y + c2*y^2 + ...
    static IntPolynomial from_coefficients(std::span<const Integer> coefficients);

    void add_term(const Exponents& exponents, const Integer& coefficient);

    std::size_t variables() const { return variables_; }
    const std::map<Exponents, Integer>& terms() const { return terms_; }
    unsigned degree() const;
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Integer constant_term() const;
    // gcd of all coefficients (0 for the zero polynomial).
    Integer content() const;

    Integer evaluate(std::span<const Integer> point) const;
    Integer operator()(const Integer& y) const;

    IntPolynomial operator+(const IntPolynomial& other) const;
    IntPolynomial operator-(const IntPolynomial& other) const;
    IntPolynomial operator*(const Integer& scalar) const;
    IntPolynomial operator+(const Integer& scalar) const;
    bool operator==(const IntPolynomial& other) const = default;

    std::string to_string(std::string_view names = "y") const;

  private:
    std::size_t variables_;
    std::map<Exponents, Integer> terms_;
};

// Reduction of an IntPolynomial modulo a prime p; coefficients in [0, p).
class ModPPolynomial {
  public:
    ModPPolynomial(std::uint64_t p, std::size_t variables = 1);

    static ModPPolynomial reduce(const IntPolynomial& poly, std::uint64_t p);
    // Univariate polynomial from dense coefficients (reduced mod p).
    static ModPPolynomial from_dense(std::uint64_t p, std::span<const std::uint64_t> coefficients);

    std::uint64_t prime() const { return p_; }
    std::size_t variables() const { return variables_; }
    const std::map<Exponents, std::uint64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Degree; -1 for the zero polynomial.
    int degree() const;

    // Coefficients in [0, p) as an integer polynomial.
    IntPolynomial lift() const;
    // Dense coefficient vector (univariate only).
    std::vector<std::uint64_t> dense() const;
    std::uint64_t evaluate(std::span<const std::uint64_t> point) const;

    bool operator==(const ModPPolynomial& other) const = default;

  private:
    std::uint64_t p_;
    std::size_t variables_;
    std::map<Exponents, std::uint64_t> terms_;
};

// Monic gcd in F_p[x]. Univariate inputs only; throws DomainError otherwise
// (multivariate coprimality of linear forms lives in local_factors).
ModPPolynomial mod_p_gcd(const ModPPolynomial& a, const ModPPolynomial& b);

// Parses "c*y^e" terms joined by '+'/'-'. `names` lists the accepted
// single-letter variables in index order, e.g. "y" or "lm".
IntPolynomial parse_polynomial(std::string_view text, std::string_view names = "y");
// Comma-separated list of polynomials.
std::vector<IntPolynomial> parse_polynomial_list(std::string_view text,
                                                 std::string_view names = "y");

}  // namespace bgp
