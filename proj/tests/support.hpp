#pragma once

#include <random>

#include "equichow/ideal.hpp"

namespace equichow::testing {

inline Poly P(const char* text, const TablePtr& t) { return parse_poly(text, t); }

// Homogeneous of the given grade, `terms` draws with coefficients in [-c, c].
inline Poly random_homogeneous(std::mt19937_64& rng, const TablePtr& t, unsigned grade, int terms = 4, int c = 5) {
    auto monos = monomials_of_grade(*t, grade);
    Poly p(t);
    if (monos.empty()) return p;
    std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
    std::uniform_int_distribution<int> coeff(-c, c);
    for (int k = 0; k < terms; ++k) p += Poly::monomial(t, monos[pick(rng)], coeff(rng));
    return p;
}

inline Poly random_poly(std::mt19937_64& rng, const TablePtr& t, unsigned max_grade, int terms = 5, int c = 5) {
    Poly p(t);
    std::uniform_int_distribution<unsigned> g(0, max_grade);
    for (int k = 0; k < terms; ++k) p += random_homogeneous(rng, t, g(rng), 1, c);
    return p;
}

inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix m = IntMatrix::identity(n);
    if (n < 2) return m;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int k = 0; k < 12; ++k) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        int f = c(rng);
        for (std::size_t col = 0; col < n; ++col) m(i, col) += f * m(j, col);
    }
    return m;
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    IntMatrix m(r, c);
    std::uniform_int_distribution<int> v(-6, 6);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = v(rng);
    return m;
}

// Membership by linear algebra in one degree: p lies in the grade-n part of
// the ideal iff its coordinates are an integer combination of the multiples
// of the generators.
inline bool naive_contains(const Poly& p, const std::vector<Poly>& g) {
    auto n = p.grade();
    if (!n) return p.is_zero();
    RingPresentation pres{p.table(), g};
    auto basis = monomials_of_grade(*p.table(), *n);
    return LatticeSolver(relation_span(pres, *n, basis)).contains(coordinates(p, basis));
}

}  // namespace equichow::testing
