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

#include "qpump/f2poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>
#include <tuple>

namespace qpump {

namespace {

std::tuple<int, int, int, int> key(const Monomial& m) {
    return {m.m, m.k, m.j, m.i};
}

}  // namespace

bool operator==(const Monomial& a, const Monomial& b) { return key(a) == key(b); }
bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
bool operator<(const Monomial& a, const Monomial& b) { return key(a) < key(b); }

F2LaurentPoly::F2LaurentPoly(std::initializer_list<Monomial> ms) : terms_(ms) {
    normalize();
}

F2LaurentPoly::F2LaurentPoly(std::vector<Monomial> ms) : terms_(std::move(ms)) {
    normalize();
}

F2LaurentPoly F2LaurentPoly::one() { return F2LaurentPoly{Monomial{}}; }

F2LaurentPoly F2LaurentPoly::monomial(int i, int j, int k, int m) {
    if (m != 0 && m != 1) throw std::invalid_argument("s exponent must be 0 or 1");
    return F2LaurentPoly{Monomial{i, j, k, m}};
}

void F2LaurentPoly::normalize() {
    std::sort(terms_.begin(), terms_.end());
    // Duplicate runs cancel pairwise (coefficients live in F2).
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (std::size_t a = 0; a < terms_.size();) {
        std::size_t b = a;
        while (b < terms_.size() && terms_[b] == terms_[a]) ++b;
        if ((b - a) % 2 == 1) out.push_back(terms_[a]);
        a = b;
    }
    terms_ = std::move(out);
}

bool F2LaurentPoly::coeff(const Monomial& mono) const {
    return std::binary_search(terms_.begin(), terms_.end(), mono);
}

bool F2LaurentPoly::coeff(int i, int j, int k, int m) const {
    return coeff(Monomial{i, j, k, m});
}

bool F2LaurentPoly::pure_x() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& t) {
        return t.j == 0 && t.k == 0 && t.m == 0;
    });
}

F2LaurentPoly& F2LaurentPoly::operator+=(const F2LaurentPoly& rhs) {
    std::vector<Monomial> merged;
    merged.reserve(terms_.size() + rhs.terms_.size());
    std::set_symmetric_difference(terms_.begin(), terms_.end(),
                                  rhs.terms_.begin(), rhs.terms_.end(),
                                  std::back_inserter(merged));
    terms_ = std::move(merged);
    return *this;
}

F2LaurentPoly& F2LaurentPoly::operator*=(const F2LaurentPoly& rhs) {
    std::vector<Monomial> prod;
    prod.reserve(terms_.size() * rhs.terms_.size());
    for (const Monomial& a : terms_)
        for (const Monomial& b : rhs.terms_)
            prod.push_back(Monomial{a.i + b.i, a.j + b.j, a.k + b.k, a.m ^ b.m});
    terms_ = std::move(prod);
    normalize();
    return *this;
}

F2LaurentPoly operator+(const F2LaurentPoly& a, const F2LaurentPoly& b) {
    F2LaurentPoly out = a;
    out += b;
    return out;
}

F2LaurentPoly operator*(const F2LaurentPoly& a, const F2LaurentPoly& b) {
    F2LaurentPoly out = a;
    out *= b;
    return out;
}

F2LaurentPoly conj(const F2LaurentPoly& p) {
    std::vector<Monomial> ms;
    ms.reserve(p.size());
    for (const Monomial& t : p.terms()) ms.push_back(Monomial{-t.i, -t.j, -t.k, t.m});
    return F2LaurentPoly{std::move(ms)};
}

F2LaurentPoly commutation_poly(const F2LaurentPoly& a, const F2LaurentPoly& b) {
    return a * conj(b);
}

F2LaurentPoly ca_expand(const F2LaurentPoly& f, int rows) {
    if (!f.pure_x()) throw std::invalid_argument("CA rule must be a polynomial in x alone");
    if (rows < 0) throw std::invalid_argument("row count must be >= 0");
    F2LaurentPoly acc;
    F2LaurentPoly fpow = F2LaurentPoly::one();
    for (int t = 0; t <= rows; ++t) {
        acc += fpow * F2LaurentPoly::monomial(0, t);
        fpow *= f;
    }
    return acc;
}

F2LaurentPoly symmetry_support(const F2LaurentPoly& q, const F2LaurentPoly& f,
                               int rows) {
    if (!q.pure_x()) throw std::invalid_argument("seed must be a polynomial in x alone");
    return q * ca_expand(f, rows);
}

F2LaurentPoly reduce_x_mod(const F2LaurentPoly& p, int period) {
    if (period < 1) throw std::invalid_argument("period must be >= 1");
    std::vector<Monomial> ms;
    ms.reserve(p.size());
    for (const Monomial& t : p.terms()) {
        int r = t.i % period;
        if (r < 0) r += period;
        ms.push_back(Monomial{r, t.j, t.k, t.m});
    }
    return F2LaurentPoly{std::move(ms)};
}

int min_x_exponent(const F2LaurentPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial has no x exponents");
    int best = p.terms()[0].i;
    for (const Monomial& t : p.terms()) best = std::min(best, t.i);
    return best;
}

int max_x_exponent(const F2LaurentPoly& p) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial has no x exponents");
    int best = p.terms()[0].i;
    for (const Monomial& t : p.terms()) best = std::max(best, t.i);
    return best;
}

int x_span(const F2LaurentPoly& p) {
    if (p.is_zero()) return 0;
    return max_x_exponent(p) - min_x_exponent(p);
}

std::string to_string(const Monomial& m) {
    std::string out;
    auto emit = [&out](char v, int e) {
        if (e == 0) return;
        if (!out.empty()) out += '*';
        out += v;
        if (e != 1) {
            out += '^';
            out += std::to_string(e);
        }
    };
    emit('x', m.i);
    emit('y', m.j);
    emit('z', m.k);
    if (m.m) {
        if (!out.empty()) out += '*';
        out += 's';
    }
    return out.empty() ? "1" : out;
}

std::string to_string(const F2LaurentPoly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const Monomial& t : p.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(t);
    }
    return out;
}

namespace {

int parse_exponent(const std::string& term, std::size_t& pos) {
    std::size_t start = pos;
    if (pos < term.size() && term[pos] == '-') ++pos;
    while (pos < term.size() && std::isdigit(static_cast<unsigned char>(term[pos]))) ++pos;
    int value = 0;
    auto [ptr, ec] = std::from_chars(term.data() + start, term.data() + pos, value);
    if (ec != std::errc{} || ptr != term.data() + pos || start == pos)
        throw std::invalid_argument("bad exponent in term '" + term + "'");
    return value;
}

// One '+'-separated term. "1" is the constant monomial, a "0" factor kills
// the whole term.
bool parse_term(const std::string& term, Monomial& out) {
    if (term.empty()) throw std::invalid_argument("empty term");
    Monomial mono;
    int s_total = 0;
    std::size_t pos = 0;
    while (pos < term.size()) {
        char c = term[pos];
        if (c == '1') {
            ++pos;
        } else if (c == '0') {
            ++pos;
            mono = Monomial{};
            s_total = 0;
            // Still validate the rest of the term syntactically.
            std::size_t rest = pos;
            while (rest < term.size()) {
                if (term[rest] != '*') throw std::invalid_argument("bad factor in term '" + term + "'");
                ++rest;
            }
            return false;
        } else if (c == 'x' || c == 'y' || c == 'z' || c == 's') {
            ++pos;
            int e = 1;
            if (pos < term.size() && term[pos] == '^') {
                ++pos;
                e = parse_exponent(term, pos);
            }
            switch (c) {
                case 'x': mono.i += e; break;
                case 'y': mono.j += e; break;
                case 'z': mono.k += e; break;
                case 's': s_total += e; break;
            }
        } else {
            throw std::invalid_argument(std::string("unexpected character '") + c + "' in term '" + term + "'");
        }
        if (pos < term.size()) {
            if (term[pos] != '*') throw std::invalid_argument("expected '*' in term '" + term + "'");
            ++pos;
            if (pos == term.size()) throw std::invalid_argument("trailing '*' in term '" + term + "'");
        }
    }
    if (s_total != 0 && s_total != 1)
        throw std::invalid_argument("s exponent must be 0 or 1 in term '" + term + "'");
    mono.m = s_total;
    out = mono;
    return true;
}

}  // namespace

F2LaurentPoly parse_poly(const std::string& text) {
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    if (compact.empty()) throw std::invalid_argument("empty polynomial string");

    std::vector<Monomial> ms;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = compact.find('+', pos);
        std::string term = compact.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        Monomial mono;
        if (parse_term(term, mono)) ms.push_back(mono);
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return F2LaurentPoly{std::move(ms)};
}

}  // namespace qpump
