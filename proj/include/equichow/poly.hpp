#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "equichow/errors.hpp"

namespace equichow {

using Integer = mpz_class;
using Rational = mpq_class;

// Ordered list of graded symbols. Immutable once built; shared by every Poly
// over it.
class VarTable {
public:
    struct Var {
        std::string name;
        unsigned degree;
    };

    static std::shared_ptr<const VarTable> make(std::vector<Var> vars);

    std::size_t size() const { return vars_.size(); }
    const Var& operator[](std::size_t i) const { return vars_[i]; }
    const std::vector<Var>& vars() const { return vars_; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index(std::string_view name) const;  // throws InvalidInput

    bool same_as(const VarTable& other) const;

private:
    explicit VarTable(std::vector<Var> vars) : vars_(std::move(vars)) {}
    std::vector<Var> vars_;
};

using TablePtr = std::shared_ptr<const VarTable>;

using Exponents = std::vector<std::uint32_t>;

struct Term {
    Exponents exps;
    Integer coeff;
};

unsigned monomial_grade(const Exponents& e, const VarTable& table);

// Canonical storage order: weighted grade first, then lexicographic in table
// order. Returns true when a sorts strictly before b (i.e. a is larger).
bool canonical_before(const Exponents& a, const Exponents& b, const VarTable& table);

class Poly {
public:
    Poly() = default;
    explicit Poly(TablePtr table) : table_(std::move(table)) {}

    static Poly constant(TablePtr table, const Integer& c);
    static Poly variable(TablePtr table, std::string_view name);
    static Poly variable(TablePtr table, std::size_t index);
    static Poly monomial(TablePtr table, Exponents exps, const Integer& c = 1);
    // Terms in any order, possibly with duplicates and zeros.
    static Poly from_terms(TablePtr table, std::vector<Term> terms);

    const TablePtr& table() const { return table_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_homogeneous() const;
    // Grade of a nonzero homogeneous poly; nullopt for zero or inhomogeneous.
    std::optional<unsigned> grade() const;
    // Highest grade present, 0 for the zero poly.
    unsigned max_grade() const;

    Integer coefficient(const Exponents& e) const;
    bool involves(std::size_t var) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Integer& c);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Integer& c) { return a *= c; }
    friend Poly operator*(const Integer& c, Poly a) { return a *= c; }

    friend bool operator==(const Poly& a, const Poly& b);

    Poly pow(unsigned n) const;

    // Same symbols by name in another table; only variables that occur need
    // to exist there.
    Poly rebase(const TablePtr& target) const;

    // Numeric value at a point (one value per table variable).
    Rational evaluate(std::span<const Rational> point) const;

    std::string to_string() const;

private:
    void check_table(const Poly& o) const;
    void normalize();

    TablePtr table_;
    std::vector<Term> terms_;  // canonical order, nonzero coefficients
};

Poly mul(const Poly& p, const Poly& q);

// Ring homomorphism into `target` given one image per source variable.
// Images must live over `target`.
Poly compose(const Poly& p, std::span<const Poly> images, const TablePtr& target);

// Graded substitution within one table; unassigned variables map to
// themselves. Every image must be homogeneous of the replaced variable's
// degree (the zero poly is allowed).
Poly substitute(const Poly& p, const std::map<std::string, Poly>& assignment);

Poly graded_component(const Poly& p, unsigned n);

// r with r*q == p over the integers, or nullopt. Throws on q == 0.
std::optional<Poly> exact_divide(const Poly& p, const Poly& q);

// Rewrites a polynomial symmetric in `pair` as a polynomial in `targets`,
// with targets.first = sum and targets.second = product. nullopt when p is not
// symmetric.
std::optional<Poly> to_elementary_symmetric(const Poly& p,
                                            std::pair<std::string, std::string> pair,
                                            std::pair<std::string, std::string> targets);

Poly parse_poly(std::string_view text, const TablePtr& table);

std::string render(const Poly& p);

}  // namespace equichow
