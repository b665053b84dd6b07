#include "equichow/ideal.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace equichow {

// ---------------------------------------------------------------------------
// MonomialOrder

namespace {

std::vector<std::size_t> build_priority(const TablePtr& table, const std::vector<std::string>& names) {
    std::vector<std::size_t> p;
    std::vector<bool> used(table->size(), false);
    for (const auto& n : names) {
        auto i = table->find(n);
        if (i && !used[*i]) {
            p.push_back(*i);
            used[*i] = true;
        }
    }
    for (std::size_t i = 0; i < table->size(); ++i)
        if (!used[i]) p.push_back(i);
    return p;
}

}  // namespace

MonomialOrder MonomialOrder::grevlex(const TablePtr& table, const std::vector<std::string>& priority) {
    return MonomialOrder(Kind::GradedReverseLex, table, build_priority(table, priority));
}

MonomialOrder MonomialOrder::lex(const TablePtr& table, const std::vector<std::string>& priority) {
    return MonomialOrder(Kind::Lex, table, build_priority(table, priority));
}

MonomialOrder MonomialOrder::standard(const TablePtr& table) {
    return grevlex(table, {"e", "x", "d1", "l2", "l1"});
}

bool MonomialOrder::greater(const Exponents& a, const Exponents& b) const {
    if (kind_ == Kind::Lex) {
        for (std::size_t v : priority_)
            if (a[v] != b[v]) return a[v] > b[v];
        return false;
    }
    unsigned ga = monomial_grade(a, *table_), gb = monomial_grade(b, *table_);
    if (ga != gb) return ga > gb;
    for (auto it = priority_.rbegin(); it != priority_.rend(); ++it)
        if (a[*it] != b[*it]) return a[*it] < b[*it];
    return false;
}

// ---------------------------------------------------------------------------
// Ordered term lists

namespace {

using Terms = std::vector<Term>;

Terms to_ordered(const Poly& p, const MonomialOrder& ord) {
    Terms t = p.terms();
    std::sort(t.begin(), t.end(), [&](const Term& a, const Term& b) { return ord.greater(a.exps, b.exps); });
    return t;
}

bool divides(const Exponents& d, const Exponents& m) {
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > m[i]) return false;
    return true;
}

Exponents quotient_exps(const Exponents& m, const Exponents& d) {
    Exponents q(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) q[i] = m[i] - d[i];
    return q;
}

Exponents lcm_exps(const Exponents& a, const Exponents& b) {
    Exponents l(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) l[i] = std::max(a[i], b[i]);
    return l;
}

// p - c * x^shift * g
Terms sub_multiple(const Terms& p, const Integer& c, const Exponents& shift, const Terms& g,
                   const MonomialOrder& ord) {
    Terms out;
    out.reserve(p.size() + g.size());
    std::size_t i = 0, j = 0;
    Exponents e(shift.size());
    auto shifted = [&](std::size_t k) {
        for (std::size_t v = 0; v < shift.size(); ++v) e[v] = g[k].exps[v] + shift[v];
        return e;
    };
    while (i < p.size() || j < g.size()) {
        if (j == g.size()) {
            out.push_back(p[i++]);
            continue;
        }
        Exponents ej = shifted(j);
        if (i < p.size() && ord.greater(p[i].exps, ej)) {
            out.push_back(p[i++]);
        } else if (i == p.size() || ord.greater(ej, p[i].exps)) {
            out.push_back({ej, -c * g[j].coeff});
            ++j;
        } else {
            Integer v = p[i].coeff - c * g[j].coeff;
            if (v != 0) out.push_back({p[i].exps, std::move(v)});
            ++i;
            ++j;
        }
    }
    return out;
}

Terms scaled_shift(const Terms& g, const Integer& c, const Exponents& shift) {
    Terms out;
    out.reserve(g.size());
    for (const auto& t : g) {
        Exponents e(shift.size());
        for (std::size_t v = 0; v < shift.size(); ++v) e[v] = t.exps[v] + shift[v];
        out.push_back({std::move(e), c * t.coeff});
    }
    return out;
}

Terms add_terms(const Terms& a, const Terms& b, const MonomialOrder& ord) {
    Exponents zero(a.empty() ? (b.empty() ? 0 : b.front().exps.size()) : a.front().exps.size(), 0);
    return sub_multiple(a, Integer(-1), zero, b, ord);
}

// Full reduction: top and tail terms are reduced with Euclidean remainders.
Terms reduce(Terms p, const std::vector<Terms>& basis, const MonomialOrder& ord, std::size_t skip = SIZE_MAX) {
    Terms rem;
    while (!p.empty()) {
        const Term& lt = p.front();
        const Terms* best = nullptr;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (k == skip) continue;
            const Term& g = basis[k].front();
            if (!divides(g.exps, lt.exps)) continue;
            if (!best || g.coeff < best->front().coeff) best = &basis[k];
        }
        if (best) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), lt.coeff.get_mpz_t(), best->front().coeff.get_mpz_t());
            if (q != 0) {
                Exponents shift = quotient_exps(lt.exps, best->front().exps);
                Exponents lead = lt.exps;
                p = sub_multiple(p, q, shift, *best, ord);
                if (p.empty() || p.front().exps != lead) continue;  // term cancelled
            }
        }
        rem.push_back(std::move(p.front()));
        p.erase(p.begin());
    }
    return rem;
}

void make_positive(Terms& t) {
    if (!t.empty() && t.front().coeff < 0)
        for (auto& x : t) x.coeff = -x.coeff;
}

Poly to_poly(const Terms& t, const TablePtr& table) { return Poly::from_terms(table, t); }

}  // namespace

// ---------------------------------------------------------------------------
// Gröbner

IdealBasis strong_groebner(const std::vector<Poly>& gens, const MonomialOrder& order) {
    const TablePtr& table = order.table();
    std::vector<Terms> g;
    for (const auto& p : gens) {
        if (!p.table()->same_as(*table)) throw InvalidInput("strong_groebner: variable table mismatch");
        if (p.is_zero()) continue;
        Terms t = to_ordered(p, order);
        make_positive(t);
        g.push_back(std::move(t));
    }

    // pairs keyed by (lcm grade, j, i) for a deterministic processing order
    std::set<std::tuple<unsigned, std::size_t, std::size_t>> pairs;
    auto add_pairs = [&](std::size_t j) {
        for (std::size_t i = 0; i < j; ++i) {
            Exponents l = lcm_exps(g[i].front().exps, g[j].front().exps);
            pairs.emplace(monomial_grade(l, *table), j, i);
        }
    };
    for (std::size_t j = 0; j < g.size(); ++j) add_pairs(j);

    while (!pairs.empty()) {
        auto [grade, j, i] = *pairs.begin();
        pairs.erase(pairs.begin());
        const Term& fi = g[i].front();
        const Term& fj = g[j].front();
        const Exponents m = lcm_exps(fi.exps, fj.exps);
        const Exponents si = quotient_exps(m, fi.exps), sj = quotient_exps(m, fj.exps);

        std::vector<Terms> candidates;
        Integer l;
        mpz_lcm(l.get_mpz_t(), fi.coeff.get_mpz_t(), fj.coeff.get_mpz_t());
        Terms spoly = sub_multiple(scaled_shift(g[i], l / fi.coeff, si), l / fj.coeff, sj, g[j], order);
        candidates.push_back(std::move(spoly));

        const bool i_div_j = mpz_divisible_p(fj.coeff.get_mpz_t(), fi.coeff.get_mpz_t());
        const bool j_div_i = mpz_divisible_p(fi.coeff.get_mpz_t(), fj.coeff.get_mpz_t());
        if (!i_div_j && !j_div_i) {
            Integer d, u, v;
            mpz_gcdext(d.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), fi.coeff.get_mpz_t(), fj.coeff.get_mpz_t());
            candidates.push_back(add_terms(scaled_shift(g[i], u, si), scaled_shift(g[j], v, sj), order));
        }

        for (auto& c : candidates) {
            Terms r = reduce(std::move(c), g, order);
            if (r.empty()) continue;
            make_positive(r);
            g.push_back(std::move(r));
            add_pairs(g.size() - 1);
        }
    }

    // drop elements whose leading term is a multiple of another's
    std::vector<bool> keep(g.size(), true);
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = 0; b < g.size() && keep[a]; ++b) {
            if (a == b || !keep[b]) continue;
            const Term& ta = g[a].front();
            const Term& tb = g[b].front();
            if (divides(tb.exps, ta.exps) && mpz_divisible_p(ta.coeff.get_mpz_t(), tb.coeff.get_mpz_t())) {
                bool same = ta.exps == tb.exps && ta.coeff == tb.coeff;
                if (!same || b < a) keep[a] = false;
            }
        }
    }
    std::vector<Terms> minimal;
    for (std::size_t a = 0; a < g.size(); ++a)
        if (keep[a]) minimal.push_back(std::move(g[a]));

    // tail reduction
    for (std::size_t k = 0; k < minimal.size(); ++k) {
        Terms tail(minimal[k].begin() + 1, minimal[k].end());
        Terms reduced = reduce(std::move(tail), minimal, order, k);
        reduced.insert(reduced.begin(), minimal[k].front());
        minimal[k] = std::move(reduced);
    }

    std::sort(minimal.begin(), minimal.end(),
              [&](const Terms& a, const Terms& b) {
                  if (a.front().exps != b.front().exps) return order.greater(b.front().exps, a.front().exps);
                  return a.front().coeff < b.front().coeff;
              });

    IdealBasis out{{}, order, true};
    for (const auto& t : minimal) out.gens.push_back(to_poly(t, table));
    return out;
}

Poly normal_form(const Poly& p, const IdealBasis& basis) {
    if (!basis.is_strong_groebner) throw InvalidInput("normal_form requires a strong Groebner basis");
    const TablePtr& table = basis.order.table();
    if (!p.table()->same_as(*table)) throw InvalidInput("normal_form: variable table mismatch");
    std::vector<Terms> g;
    g.reserve(basis.gens.size());
    for (const auto& b : basis.gens) g.push_back(to_ordered(b, basis.order));
    return to_poly(reduce(to_ordered(p, basis.order), g, basis.order), table);
}

bool ideal_contains(const Poly& p, const std::vector<Poly>& gens, const MonomialOrder& order) {
    if (p.is_zero()) return true;
    return normal_form(p, strong_groebner(gens, order)).is_zero();
}

bool ideal_equal(const std::vector<Poly>& a, const std::vector<Poly>& b, const MonomialOrder& order) {
    IdealBasis ga = strong_groebner(a, order);
    IdealBasis gb = strong_groebner(b, order);
    for (const auto& p : b)
        if (!normal_form(p, ga).is_zero()) return false;
    for (const auto& p : a)
        if (!normal_form(p, gb).is_zero()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Graded pieces

RingPresentation RingPresentation::parse(const TablePtr& table, const std::vector<std::string>& relations) {
    RingPresentation r{table, {}};
    for (const auto& s : relations) r.relations.push_back(parse_poly(s, table));
    r.check_homogeneous();
    return r;
}

void RingPresentation::check_homogeneous() const {
    for (const auto& r : relations) {
        if (!r.table()->same_as(*table)) throw InvalidInput("relation over wrong table");
        if (!r.is_homogeneous()) throw InvalidInput("relation '" + render(r) + "' is not homogeneous");
    }
}

std::vector<Exponents> monomials_of_grade(const VarTable& table, unsigned grade) {
    std::vector<Exponents> out;
    Exponents cur(table.size(), 0);
    auto rec = [&](auto&& self, std::size_t v, unsigned left) -> void {
        if (v == table.size()) {
            if (left == 0) out.push_back(cur);
            return;
        }
        const unsigned d = table[v].degree;
        for (unsigned k = 0; k * d <= left; ++k) {
            cur[v] = k;
            self(self, v + 1, left - k * d);
        }
        cur[v] = 0;
    };
    rec(rec, 0, grade);
    std::sort(out.begin(), out.end(),
              [&](const Exponents& a, const Exponents& b) { return canonical_before(a, b, table); });
    return out;
}

std::vector<Integer> coordinates(const Poly& p, const std::vector<Exponents>& basis) {
    std::map<Exponents, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
    std::vector<Integer> v(basis.size());
    for (const auto& t : p.terms()) {
        auto it = index.find(t.exps);
        if (it == index.end()) throw InvalidInput("coordinates: monomial outside the basis");
        v[it->second] = t.coeff;
    }
    return v;
}

IntMatrix relation_span(const RingPresentation& pres, unsigned n, const std::vector<Exponents>& basis) {
    std::vector<std::vector<Integer>> cols;
    for (const auto& r : pres.relations) {
        if (r.is_zero()) continue;
        auto g = r.grade();
        if (!g) throw InvalidInput("relation '" + render(r) + "' is not homogeneous");
        if (*g > n) continue;
        for (const auto& m : monomials_of_grade(*pres.table, n - *g))
            cols.push_back(coordinates(Poly::monomial(pres.table, m) * r, basis));
    }
    return IntMatrix::from_columns(basis.size(), cols);
}

GradedPieceReport graded_piece_invariants(const RingPresentation& pres, unsigned n,
                                          const std::vector<std::size_t>* basis_order) {
    pres.check_homogeneous();
    std::vector<Exponents> basis = monomials_of_grade(*pres.table, n);
    if (basis_order) {
        if (basis_order->size() != basis.size()) throw InvalidInput("basis permutation has wrong size");
        std::vector<Exponents> permuted;
        for (std::size_t i : *basis_order) permuted.push_back(basis.at(i));
        basis = std::move(permuted);
    }
    GroupInvariants inv = quotient_invariants(basis.size(), relation_span(pres, n, basis));
    GradedPieceReport rep;
    rep.degree = n;
    rep.free_rank = inv.free_rank;
    rep.torsion = inv.torsion;
    for (const auto& m : basis) rep.monomial_basis.push_back(render(Poly::monomial(pres.table, m)));
    return rep;
}

}  // namespace equichow
