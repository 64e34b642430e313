// Copyright 2026 The qpump developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace qpump {

// Laurent monomial x^i y^j z^k s^m. The sublattice marker s is an involution
// (s*s = 1), so m only ever takes the values 0 and 1.
struct Monomial {
    int i = 0;
    int j = 0;
    int k = 0;
    int m = 0;
};

bool operator==(const Monomial& a, const Monomial& b);
bool operator!=(const Monomial& a, const Monomial& b);
// Canonical term order: lexicographic on (m, k, j, i).
bool operator<(const Monomial& a, const Monomial& b);

// Finite set of monomials with mod-2 coefficient semantics: a term is present
// iff its coefficient is 1; the empty set is the zero polynomial. Terms are
// stored sorted in the canonical order, so equality is structural.
class F2LaurentPoly {
  public:
    F2LaurentPoly() = default;
    F2LaurentPoly(std::initializer_list<Monomial> ms);
    explicit F2LaurentPoly(std::vector<Monomial> ms);

    static F2LaurentPoly zero() { return {}; }
    static F2LaurentPoly one();
    static F2LaurentPoly monomial(int i, int j = 0, int k = 0, int m = 0);

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool coeff(int i, int j = 0, int k = 0, int m = 0) const;
    bool coeff(const Monomial& mono) const;

    // True when every term is a pure power of x (no y, z or s factors).
    bool pure_x() const;

    F2LaurentPoly& operator+=(const F2LaurentPoly& rhs);
    F2LaurentPoly& operator*=(const F2LaurentPoly& rhs);

    friend F2LaurentPoly operator+(const F2LaurentPoly& a, const F2LaurentPoly& b);
    friend F2LaurentPoly operator*(const F2LaurentPoly& a, const F2LaurentPoly& b);
    friend bool operator==(const F2LaurentPoly& a, const F2LaurentPoly& b) = default;

  private:
    std::vector<Monomial> terms_;
    void normalize();
};

// Negates every (i, j, k); the sublattice bit is untouched.
F2LaurentPoly conj(const F2LaurentPoly& p);

// Commutation polynomial a * conj(b). Its coefficient at x^i y^j z^k s^0
// records whether X(a) anticommutes with the (i, j, k)-translate of Z(b).
F2LaurentPoly commutation_poly(const F2LaurentPoly& a, const F2LaurentPoly& b);

// Sum_{t=0..rows} f(x)^t y^t: the forward light cone of a one-dimensional
// cellular automaton with update rule f. Throws std::invalid_argument unless
// f is a polynomial in x alone and rows >= 0.
F2LaurentPoly ca_expand(const F2LaurentPoly& f, int rows);

// q(x) * ca_expand(f, rows): the X support of the symmetry seeded by q on the
// first row. Both q and f must be polynomials in x alone.
F2LaurentPoly symmetry_support(const F2LaurentPoly& q, const F2LaurentPoly& f,
                               int rows);

// Wraps x exponents onto 0..period-1. Terms may cancel after wrapping.
F2LaurentPoly reduce_x_mod(const F2LaurentPoly& p, int period);

// Extreme x exponents over all terms; throw on the zero polynomial.
int min_x_exponent(const F2LaurentPoly& p);
int max_x_exponent(const F2LaurentPoly& p);
// max - min x exponent, 0 for the zero polynomial.
int x_span(const F2LaurentPoly& p);

// Text form: terms joined by " + " in canonical order, factors joined by "*",
// exponent 1 left bare, e.g. "1 + x*y + x^-1*s". Zero prints as "0".
std::string to_string(const Monomial& m);
std::string to_string(const F2LaurentPoly& p);

// Inverse of to_string, whitespace-insensitive. Throws std::invalid_argument
// on malformed input or an s exponent outside {0, 1}.
F2LaurentPoly parse_poly(const std::string& text);

}  // namespace qpump
