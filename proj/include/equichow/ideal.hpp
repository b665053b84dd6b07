#pragma once

#include <string>
#include <vector>

#include "equichow/poly.hpp"
#include "equichow/smith.hpp"

namespace equichow {

class MonomialOrder {
public:
    enum class Kind { GradedReverseLex, Lex };

    // Variables named in `priority` come first (highest first); the rest of
    // the table follows in table order. Unknown names are ignored.
    static MonomialOrder grevlex(const TablePtr& table, const std::vector<std::string>& priority = {});
    static MonomialOrder lex(const TablePtr& table, const std::vector<std::string>& priority = {});
    // grevlex with priority e > x > d1 > l2 > l1
    static MonomialOrder standard(const TablePtr& table);

    Kind kind() const { return kind_; }
    const std::vector<std::size_t>& priority() const { return priority_; }
    const TablePtr& table() const { return table_; }

    // True when a is strictly larger than b.
    bool greater(const Exponents& a, const Exponents& b) const;

private:
    MonomialOrder(Kind k, TablePtr t, std::vector<std::size_t> p)
        : kind_(k), table_(std::move(t)), priority_(std::move(p)) {}
    Kind kind_;
    TablePtr table_;
    std::vector<std::size_t> priority_;
};

struct IdealBasis {
    std::vector<Poly> gens;
    MonomialOrder order;
    bool is_strong_groebner = false;
};

// Strong Gröbner basis over the integers (S- and G-polynomials), reduced and
// with positive leading coefficients.
IdealBasis strong_groebner(const std::vector<Poly>& gens, const MonomialOrder& order);

// Unique remainder modulo a strong basis: every remaining coefficient lies in
// [0, c) where c is the smallest leading coefficient dividing its monomial.
Poly normal_form(const Poly& p, const IdealBasis& basis);

bool ideal_contains(const Poly& p, const std::vector<Poly>& gens, const MonomialOrder& order);
bool ideal_equal(const std::vector<Poly>& a, const std::vector<Poly>& b, const MonomialOrder& order);

// Finitely presented graded ring Z[table]/(relations).
struct RingPresentation {
    TablePtr table;
    std::vector<Poly> relations;

    static RingPresentation parse(const TablePtr& table, const std::vector<std::string>& relations);
    void check_homogeneous() const;
};

// All monomials of the given weighted grade, in canonical order.
std::vector<Exponents> monomials_of_grade(const VarTable& table, unsigned grade);

// Coordinates of the grade-n part of p in the given monomial basis.
std::vector<Integer> coordinates(const Poly& p, const std::vector<Exponents>& basis);

// Columns spanning the grade-n part of the relation ideal, in `basis` coordinates.
IntMatrix relation_span(const RingPresentation& pres, unsigned n, const std::vector<Exponents>& basis);

struct GradedPieceReport {
    unsigned degree = 0;
    std::size_t free_rank = 0;
    std::vector<Integer> torsion;
    std::vector<std::string> monomial_basis;
};

// `basis_order`, when given, permutes the monomial enumeration (for testing
// order independence).
GradedPieceReport graded_piece_invariants(const RingPresentation& pres, unsigned n,
                                          const std::vector<std::size_t>* basis_order = nullptr);

}  // namespace equichow
