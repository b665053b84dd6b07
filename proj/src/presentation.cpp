#include "equichow/presentation.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>

namespace equichow {

// ---------------------------------------------------------------------------
// Homomorphisms

RingHom::RingHom(RingPresentation source, RingPresentation target, const std::map<std::string, Poly>& images,
                 const MonomialOrder* target_order)
    : source_(std::move(source)), target_(std::move(target)) {
    source_.check_homogeneous();
    target_.check_homogeneous();
    const VarTable& st = *source_.table;
    const VarTable& tt = *target_.table;
    for (const auto& [name, img] : images)
        if (!st.find(name)) throw InvalidInput("image given for unknown source variable '" + name + "'");

    for (const auto& var : st.vars()) {
        auto it = images.find(var.name);
        Poly img;
        if (it != images.end()) {
            img = it->second;
            if (!img.table() || !img.table()->same_as(tt))
                throw InvalidInput("image of '" + var.name + "' is over the wrong table");
        } else {
            auto idx = tt.find(var.name);
            if (!idx) throw InvalidInput("no image for '" + var.name + "' and no target variable of that name");
            img = Poly::variable(target_.table, *idx);
        }
        if (!img.is_zero() && img.grade() != std::optional<unsigned>(var.degree))
            throw InvalidInput("image of '" + var.name + "' has the wrong grade");
        images_.push_back(std::move(img));
    }

    MonomialOrder order = target_order ? *target_order : MonomialOrder::standard(target_.table);
    target_basis_ = std::make_shared<const IdealBasis>(strong_groebner(target_.relations, order));
    for (const auto& r : source_.relations)
        if (!normal_form(lift(r), *target_basis_).is_zero())
            throw InvalidInput("homomorphism is not well defined: relation '" + render(r) +
                               "' does not map into the target ideal");
}

Poly RingHom::lift(const Poly& p) const {
    if (!p.table() || !p.table()->same_as(*source_.table)) throw InvalidInput("element is over the wrong table");
    return compose(p, images_, target_.table);
}

Poly hom_apply(const RingHom& hom, const Poly& p) { return normal_form(hom.lift(p), hom.target_basis()); }

// ---------------------------------------------------------------------------
// Lattice helpers

namespace {

IntMatrix hcat(const std::vector<const IntMatrix*>& parts, std::size_t rows) {
    std::size_t cols = 0;
    for (auto* p : parts) {
        if (p->rows() != rows) throw std::logic_error("hcat: row mismatch");
        cols += p->cols();
    }
    IntMatrix m(rows, cols);
    std::size_t off = 0;
    for (auto* p : parts) {
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < p->cols(); ++j) m(i, off + j) = (*p)(i, j);
        off += p->cols();
    }
    return m;
}

IntMatrix vcat(const IntMatrix& top, const IntMatrix& bottom) {
    if (top.cols() != bottom.cols()) throw std::logic_error("vcat: column mismatch");
    IntMatrix m(top.rows() + bottom.rows(), top.cols());
    for (std::size_t j = 0; j < top.cols(); ++j) {
        for (std::size_t i = 0; i < top.rows(); ++i) m(i, j) = top(i, j);
        for (std::size_t i = 0; i < bottom.rows(); ++i) m(top.rows() + i, j) = bottom(i, j);
    }
    return m;
}

IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

IntMatrix negated(IntMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
    return m;
}

// Is x -> map*x injective from Z^s/span(rel_src) to Z^t/span(rel_tgt)?
bool injective_mod(const IntMatrix& map, const IntMatrix& rel_src, const IntMatrix& rel_tgt) {
    const std::size_t s = map.cols();
    IntMatrix kernel = kernel_basis(hcat({&map, &rel_tgt}, map.rows()));
    LatticeSolver src(rel_src);
    for (std::size_t j = 0; j < kernel.cols(); ++j) {
        std::vector<Integer> v(s);
        for (std::size_t i = 0; i < s; ++i) v[i] = kernel(i, j);
        if (!src.contains(v)) return false;
    }
    return true;
}

struct Piece {
    std::vector<Exponents> basis;
    IntMatrix relations;
};

Piece piece(const RingPresentation& pres, unsigned n) {
    Piece p;
    p.basis = monomials_of_grade(*pres.table, n);
    p.relations = relation_span(pres, n, p.basis);
    return p;
}

IntMatrix hom_matrix(const RingHom& hom, const Piece& src, const Piece& tgt) {
    std::vector<std::vector<Integer>> cols;
    for (const auto& m : src.basis)
        cols.push_back(coordinates(hom.lift(Poly::monomial(hom.source().table, m)), tgt.basis));
    return IntMatrix::from_columns(tgt.basis.size(), cols);
}

CartesianDegreeReport check_degree(const CartesianSquareSpec& sq, unsigned n) {
    const Piece A = piece(sq.a_to_b.source(), n);
    const Piece B = piece(sq.a_to_b.target(), n);
    const Piece C = piece(sq.a_to_c.target(), n);
    const Piece D = piece(sq.b_to_d.target(), n);

    CartesianDegreeReport rep;
    rep.degree = n;
    rep.a = quotient_invariants(A.basis.size(), A.relations);
    rep.b = quotient_invariants(B.basis.size(), B.relations);
    rep.c = quotient_invariants(C.basis.size(), C.relations);
    rep.d = quotient_invariants(D.basis.size(), D.relations);

    const IntMatrix alpha = vcat(hom_matrix(sq.a_to_b, A, B), hom_matrix(sq.a_to_c, A, C));
    const IntMatrix q = hom_matrix(sq.b_to_d, B, D);
    const IntMatrix p = negated(hom_matrix(sq.c_to_d, C, D));
    const IntMatrix rel_bc = block_diagonal(B.relations, C.relations);
    const std::size_t nbc = B.basis.size() + C.basis.size();

    // lifts of the fiber product: (b, c) with q(b) - p(c) in span R_D
    IntMatrix lifted = kernel_basis(hcat({&q, &p, &D.relations}, D.basis.size()));
    IntMatrix fiber(nbc, lifted.cols());
    for (std::size_t j = 0; j < lifted.cols(); ++j)
        for (std::size_t i = 0; i < nbc; ++i) fiber(i, j) = lifted(i, j);

    LatticeSolver image(hcat({&alpha, &rel_bc}, nbc));
    rep.surjective = true;
    for (std::size_t j = 0; j < fiber.cols() && rep.surjective; ++j)
        if (!image.contains(fiber.column(j))) rep.surjective = false;
    rep.injective = injective_mod(alpha, A.relations, rel_bc);

    IntMatrix lattice = column_lattice_basis(hcat({&fiber, &rel_bc}, nbc));
    LatticeSolver in_lattice(lattice);
    std::vector<std::vector<Integer>> rel_coords;
    for (std::size_t j = 0; j < rel_bc.cols(); ++j) {
        auto c = in_lattice.solve(rel_bc.column(j));
        if (!c) throw std::logic_error("relation lattice escapes the fiber product");
        rel_coords.push_back(std::move(*c));
    }
    rep.fiber = quotient_invariants(lattice.cols(), IntMatrix::from_columns(lattice.cols(), rel_coords));
    return rep;
}

}  // namespace

bool CartesianReport::passed() const {
    return std::all_of(degrees.begin(), degrees.end(), [](const auto& d) { return d.passed(); });
}

std::optional<unsigned> CartesianReport::first_failure() const {
    for (const auto& d : degrees)
        if (!d.passed()) return d.degree;
    return std::nullopt;
}

void check_commutes(const CartesianSquareSpec& sq) {
    auto same = [](const RingPresentation& x, const RingPresentation& y) { return x.table->same_as(*y.table); };
    if (!same(sq.a_to_b.source(), sq.a_to_c.source()) || !same(sq.a_to_b.target(), sq.b_to_d.source()) ||
        !same(sq.a_to_c.target(), sq.c_to_d.source()) || !same(sq.b_to_d.target(), sq.c_to_d.target()))
        throw InvalidInput("square corners do not line up");
    const RingPresentation& a = sq.a_to_b.source();
    for (std::size_t v = 0; v < a.table->size(); ++v) {
        Poly g = Poly::variable(a.table, v);
        Poly diff = sq.b_to_d.lift(sq.a_to_b.lift(g)) - sq.c_to_d.lift(sq.a_to_c.lift(g));
        if (!normal_form(diff, sq.b_to_d.target_basis()).is_zero())
            throw InvalidInput("square does not commute on generator '" + (*a.table)[v].name + "'");
    }
}

CartesianReport verify_cartesian(const CartesianSquareSpec& square, unsigned max_degree, ExecutionPolicy policy) {
    check_commutes(square);
    CartesianReport report;
    report.degrees.resize(max_degree + 1);
    if (policy == ExecutionPolicy::Serial) {
        for (unsigned n = 0; n <= max_degree; ++n) report.degrees[n] = check_degree(square, n);
        return report;
    }
    std::exception_ptr failure;
    // high degrees dominate the cost, so hand them out first
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = static_cast<int>(max_degree); k >= 0; --k) {
        try {
            report.degrees[static_cast<std::size_t>(k)] = check_degree(square, static_cast<unsigned>(k));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return report;
}

bool nonzerodivisor_up_to(const RingPresentation& pres, const Poly& elt, unsigned max_degree) {
    pres.check_homogeneous();
    if (!elt.table() || !elt.table()->same_as(*pres.table)) throw InvalidInput("element is over the wrong table");
    if (elt.is_zero()) return false;
    auto g = elt.grade();
    if (!g) throw InvalidInput("element must be homogeneous");
    for (unsigned n = 0; n <= max_degree; ++n) {
        const Piece src = piece(pres, n);
        const Piece tgt = piece(pres, n + *g);
        std::vector<std::vector<Integer>> cols;
        for (const auto& m : src.basis) cols.push_back(coordinates(Poly::monomial(pres.table, m) * elt, tgt.basis));
        if (!injective_mod(IntMatrix::from_columns(tgt.basis.size(), cols), src.relations, tgt.relations))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Gysin

Gysin::Gysin(RingPresentation divisor, RingPresentation ambient, std::string xi, std::string divisor_class,
             std::string eta)
    : divisor_(std::move(divisor)), ambient_(std::move(ambient)) {
    divisor_.check_homogeneous();
    ambient_.check_homogeneous();
    xi_ = divisor_.table->index(xi);
    if ((*divisor_.table)[xi_].degree != 1) throw InvalidInput("'" + xi + "' must have degree 1");
    for (const auto& v : divisor_.table->vars()) {
        if (v.name == xi) continue;
        auto idx = ambient_.table->find(v.name);
        if (!idx || (*ambient_.table)[*idx].degree != v.degree)
            throw InvalidInput("base variable '" + v.name + "' missing from the ambient ring");
    }
    divisor_class_ = Poly::variable(ambient_.table, divisor_class);
    eta_ = Poly::variable(ambient_.table, eta);
    if (divisor_class_.grade() != 1u || eta_.grade() != 2u)
        throw InvalidInput("divisor class must have degree 1 and its partner degree 2");
    divisor_basis_ = std::make_shared<const IdealBasis>(
        strong_groebner(divisor_.relations, MonomialOrder::grevlex(divisor_.table, {xi})));
    ambient_basis_ = std::make_shared<const IdealBasis>(
        strong_groebner(ambient_.relations, MonomialOrder::standard(ambient_.table)));
}

std::pair<Poly, Poly> Gysin::split(const Poly& p) const {
    if (!p.table() || !p.table()->same_as(*divisor_.table)) throw InvalidInput("element is over the wrong table");
    Poly r = normal_form(p, *divisor_basis_);
    std::vector<Term> a, b;
    for (const auto& t : r.terms()) {
        if (t.exps[xi_] == 0) {
            a.push_back(t);
        } else if (t.exps[xi_] == 1) {
            Term u = t;
            u.exps[xi_] = 0;
            b.push_back(std::move(u));
        } else {
            throw std::logic_error("normal form kept a power of the divisor generator");
        }
    }
    return {Poly::from_terms(divisor_.table, std::move(a)), Poly::from_terms(divisor_.table, std::move(b))};
}

Poly Gysin::operator()(const Poly& p) const {
    auto [a, b] = split(p);
    Poly out = a.rebase(ambient_.table) * divisor_class_ + b.rebase(ambient_.table) * eta_;
    return normal_form(out, *ambient_basis_);
}

Poly gysin_P1_to_P(const Gysin& gysin, const Poly& p) { return gysin(p); }

std::string render_group(const GroupInvariants& g) {
    std::string s;
    if (g.free_rank) s = g.free_rank == 1 ? "Z" : "Z^" + std::to_string(g.free_rank);
    for (std::size_t i = 0; i < g.torsion.size();) {
        std::size_t j = i;
        while (j < g.torsion.size() && g.torsion[j] == g.torsion[i]) ++j;
        std::string t = "Z/" + g.torsion[i].get_str();
        if (j - i > 1) t = "(" + t + ")^" + std::to_string(j - i);
        s += (s.empty() ? "" : " + ") + t;
        i = j;
    }
    return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Characters

Poly c1_of_character(const Character& chi) {
    if (!chi.basis) throw InvalidInput("character has no basis");
    Poly out(chi.basis->table);
    for (const auto& [name, k] : chi.coefficients) {
        auto it = chi.basis->first_chern.find(name);
        if (it == chi.basis->first_chern.end()) throw InvalidInput("unknown character generator '" + name + "'");
        out += it->second * k;
    }
    return out;
}

}  // namespace equichow
