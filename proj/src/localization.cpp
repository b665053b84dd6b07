#include "equichow/localization.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace equichow {

namespace {

Integer factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

void require_linear(const Poly& w, const char* what) {
    if (w.is_zero()) return;
    auto g = w.grade();
    if (!g || *g != 1) throw InvalidInput(std::string(what) + " must be a linear form, got '" + render(w) + "'");
}

// Splits a nonzero linear form into unit * content * primitive form with a
// positive leading coefficient.
std::pair<Integer, Poly> primitive_part(const Poly& linear) {
    Integer content = 0;
    for (const auto& t : linear.terms()) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), t.coeff.get_mpz_t());
    if (linear.terms().front().coeff < 0) content = -content;
    std::vector<Term> terms = linear.terms();
    for (auto& t : terms) t.coeff /= content;
    return {content, Poly::from_terms(linear.table(), std::move(terms))};
}

}  // namespace

// ---------------------------------------------------------------------------
// Spaces

SpaceDescriptor::SpaceDescriptor(std::vector<SpaceFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw InvalidInput("space needs at least one factor");
    const TablePtr& tab = factors_.front().w0.table();
    if (!tab) throw InvalidInput("space weights have no variable table");
    std::set<std::string> hvars;
    for (const auto& f : factors_) {
        if (f.degree < 1) throw InvalidInput("symmetric power degree must be >= 1");
        if (!f.w0.table() || !f.w1.table() || !f.w0.table()->same_as(*tab) || !f.w1.table()->same_as(*tab))
            throw InvalidInput("space weights over different tables");
        require_linear(f.w0, "w0");
        require_linear(f.w1, "w1");
        if (f.w0 == f.w1) throw InvalidInput("weights w0 and w1 must differ");
        auto idx = tab->find(f.h_var);
        if (!idx) throw InvalidInput("unknown hyperplane variable '" + f.h_var + "'");
        if ((*tab)[*idx].degree != 1) throw InvalidInput("hyperplane variable '" + f.h_var + "' must have degree 1");
        if (f.w0.involves(*idx) || f.w1.involves(*idx))
            throw InvalidInput("weights may not involve the hyperplane variable '" + f.h_var + "'");
        if (!hvars.insert(f.h_var).second) throw InvalidInput("duplicate hyperplane variable '" + f.h_var + "'");
    }
}

unsigned SpaceDescriptor::dimension() const {
    unsigned d = 0;
    for (const auto& f : factors_) d += f.degree;
    return d;
}

std::vector<FixedPoint> enumerate_fixed_points(const SpaceDescriptor& space) {
    std::vector<FixedPoint> out;
    FixedPoint cur(space.size(), 0);
    for (;;) {
        out.push_back(cur);
        std::size_t k = space.size();
        while (k > 0) {
            --k;
            if (cur[k] < space.factors()[k].degree) {
                ++cur[k];
                std::fill(cur.begin() + k + 1, cur.end(), 0u);
                break;
            }
            if (k == 0) return out;
        }
        if (space.size() == 0) return out;
    }
}

namespace {

void check_point(const SpaceDescriptor& space, const FixedPoint& fp) {
    if (fp.size() != space.size()) throw InvalidInput("fixed point has wrong number of indices");
    for (std::size_t j = 0; j < fp.size(); ++j)
        if (fp[j] > space.factors()[j].degree) throw InvalidInput("fixed point index out of range");
}

// k w0 + (d - k) w1
Poly character(const SpaceFactor& f, unsigned k) {
    return Integer(k) * f.w0 + Integer(f.degree - k) * f.w1;
}

}  // namespace

Poly point_class(const SpaceDescriptor& space, const FixedPoint& fp) {
    check_point(space, fp);
    const TablePtr& tab = space.table();
    Poly cls = Poly::constant(tab, 1);
    for (std::size_t j = 0; j < space.size(); ++j) {
        const SpaceFactor& f = space.factors()[j];
        const Poly h = Poly::variable(tab, f.h_var);
        for (unsigned k = 0; k <= f.degree; ++k)
            if (k != fp[j]) cls = cls * (h - character(f, k));
    }
    return cls;
}

Poly restrict_hyperplane(const SpaceDescriptor& space, const FixedPoint& fp, std::size_t factor) {
    check_point(space, fp);
    if (factor >= space.size()) throw InvalidInput("factor index out of range");
    return character(space.factors()[factor], fp[factor]);
}

void DenominatorForm::multiply_form(const Poly& linear, unsigned multiplicity) {
    if (multiplicity == 0) return;
    if (linear.is_zero()) throw InvalidInput("zero linear form in denominator");
    auto [content, prim] = primitive_part(linear);
    Integer scale;
    mpz_pow_ui(scale.get_mpz_t(), content.get_mpz_t(), multiplicity);
    constant *= scale;
    for (auto& [form, mult] : forms)
        if (form == prim) {
            mult += multiplicity;
            return;
        }
    forms.emplace_back(std::move(prim), multiplicity);
}

Poly DenominatorForm::expand(const TablePtr& table) const {
    Poly p = Poly::constant(table, constant);
    for (const auto& [form, mult] : forms) p = p * form.pow(mult);
    return p;
}

DenominatorForm tangent_euler(const SpaceDescriptor& space, const FixedPoint& fp) {
    check_point(space, fp);
    DenominatorForm den;
    for (std::size_t j = 0; j < space.size(); ++j) {
        const SpaceFactor& f = space.factors()[j];
        const unsigned i = fp[j];
        Integer c = factorial(i) * factorial(f.degree - i);
        if (i % 2) c = -c;
        den.constant *= c;
        den.multiply_form(f.w1 - f.w0, f.degree);
    }
    return den;
}

bool operator==(const LocalizedElement& a, const LocalizedElement& b) {
    const TablePtr& tab = a.numerator.table();
    return a.numerator * b.denominator.expand(tab) == b.numerator * a.denominator.expand(tab);
}

// ---------------------------------------------------------------------------
// Maps

MapDescriptor::MapDescriptor(SpaceDescriptor source, std::vector<MapComponent> components)
    : source_(std::move(source)), components_(std::move(components)) {
    if (components_.empty()) throw InvalidInput("map needs at least one component");
    std::vector<int> covered(source_.size(), 0);
    std::vector<SpaceFactor> target;
    for (const auto& c : components_) {
        if (c.source_factors.empty()) throw InvalidInput("map component has no source factors");
        if (c.exponents.size() != c.source_factors.size())
            throw InvalidInput("map component needs one exponent per source factor");
        const SpaceFactor* first = nullptr;
        unsigned degree = 0;
        for (std::size_t k = 0; k < c.source_factors.size(); ++k) {
            std::size_t s = c.source_factors[k];
            if (s >= source_.size()) throw InvalidInput("map component refers to a missing factor");
            ++covered[s];
            if (c.exponents[k] < 1) throw InvalidInput("map exponents must be >= 1");
            const SpaceFactor& f = source_.factors()[s];
            if (!first) {
                first = &f;
            } else if (!(f.w0 == first->w0) || !(f.w1 == first->w1)) {
                throw InvalidInput("multiplied factors must share the weight pair");
            }
            degree += c.exponents[k] * f.degree;
        }
        target.push_back({degree, first->w0, first->w1, c.target_h});
    }
    for (int n : covered)
        if (n != 1) throw InvalidInput("map components must partition the source factors");
    target_ = SpaceDescriptor(std::move(target));
}

MapDescriptor MapDescriptor::multiplication(SpaceDescriptor source, std::vector<unsigned> exponents,
                                            std::string target_h) {
    MapComponent c;
    for (std::size_t j = 0; j < source.size(); ++j) c.source_factors.push_back(j);
    c.exponents = std::move(exponents);
    c.target_h = std::move(target_h);
    return MapDescriptor(std::move(source), {std::move(c)});
}

MapDescriptor MapDescriptor::product(SpaceDescriptor source, std::vector<unsigned> exponents,
                                     std::vector<std::string> target_h) {
    if (exponents.size() != source.size()) throw InvalidInput("product map needs one exponent per factor");
    if (target_h.empty())
        for (std::size_t j = 0; j < source.size(); ++j) target_h.push_back("h" + std::to_string(j + 1));
    if (target_h.size() != source.size()) throw InvalidInput("product map needs one target variable per factor");
    std::vector<MapComponent> comps;
    for (std::size_t j = 0; j < source.size(); ++j) comps.push_back({{j}, {exponents[j]}, target_h[j]});
    return MapDescriptor(std::move(source), std::move(comps));
}

FixedPoint map_image_fixed_point(const MapDescriptor& map, const FixedPoint& fp) {
    check_point(map.source(), fp);
    FixedPoint out;
    for (const auto& c : map.components()) {
        unsigned idx = 0;
        for (std::size_t k = 0; k < c.source_factors.size(); ++k) idx += c.exponents[k] * fp[c.source_factors[k]];
        out.push_back(idx);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pushforward

Poly restrict_class(const SpaceDescriptor& space, const FixedPoint& fp, const Poly& cls) {
    std::map<std::string, Poly> assignment;
    for (std::size_t j = 0; j < space.size(); ++j)
        assignment.emplace(space.factors()[j].h_var, restrict_hyperplane(space, fp, j));
    return substitute(cls, assignment);
}

LocalizedElement localization_summand(const MapDescriptor& map, const FixedPoint& fp, const Poly& cls) {
    Poly num = restrict_class(map.source(), fp, cls) * point_class(map.target(), map_image_fixed_point(map, fp));
    return {std::move(num), tangent_euler(map.source(), fp)};
}

namespace {

void check_class(const MapDescriptor& map, const Poly& cls) {
    const TablePtr& tab = map.source().table();
    if (!cls.table() || !cls.table()->same_as(*tab)) throw InvalidInput("class is over a different variable table");
    std::set<std::string> source_h;
    for (const auto& f : map.source().factors()) source_h.insert(f.h_var);
    for (const auto& f : map.target().factors())
        if (!source_h.count(f.h_var) && cls.involves(tab->index(f.h_var)))
            throw InvalidInput("class involves the target variable '" + f.h_var + "'");
}

}  // namespace

Poly pushforward(const MapDescriptor& map, const Poly& cls, ExecutionPolicy policy) {
    check_class(map, cls);
    const TablePtr& tab = map.source().table();
    const std::vector<FixedPoint> points = enumerate_fixed_points(map.source());
    const std::size_t n = points.size();

    std::vector<DenominatorForm> dens;
    dens.reserve(n);
    for (const auto& fp : points) dens.push_back(tangent_euler(map.source(), fp));

    // every point carries the same power-product of forms; only constants differ
    Integer common = 1;
    for (const auto& d : dens) {
        mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), d.constant.get_mpz_t());
        if (d.forms.size() != dens.front().forms.size()) throw DenominatorResidue("inconsistent tangent weights");
    }

    auto summand = [&](std::size_t k) {
        Poly num = restrict_class(map.source(), points[k], cls) *
                   point_class(map.target(), map_image_fixed_point(map, points[k]));
        return num * Integer(common / dens[k].constant);
    };

    Poly total(tab);
    if (policy == ExecutionPolicy::Serial) {
        for (std::size_t k = 0; k < n; ++k) total += summand(k);
    } else {
        std::vector<Poly> partial;
#pragma omp parallel
        {
#ifdef _OPENMP
            const int nt = omp_get_num_threads();
            const int me = omp_get_thread_num();
#else
            const int nt = 1;
            const int me = 0;
#endif
#pragma omp single
            partial.assign(static_cast<std::size_t>(nt), Poly(tab));
            Poly local(tab);
#pragma omp for schedule(dynamic)
            for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k)
                local += summand(static_cast<std::size_t>(k));
            partial[static_cast<std::size_t>(me)] = std::move(local);
        }
        for (auto& p : partial) total += p;
    }

    for (const auto& [form, mult] : dens.front().forms) {
        for (unsigned m = 0; m < mult; ++m) {
            auto q = exact_divide(total, form);
            if (!q)
                throw DenominatorResidue("localization sum is not divisible by (" + render(form) + ")^" +
                                         std::to_string(mult));
            total = std::move(*q);
        }
    }
    std::vector<Term> terms = total.terms();
    for (auto& t : terms) {
        if (!mpz_divisible_p(t.coeff.get_mpz_t(), common.get_mpz_t()))
            throw DenominatorResidue("localization sum leaves the integer denominator " + common.get_str());
        t.coeff /= common;
    }
    return Poly::from_terms(tab, std::move(terms));
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

// Numeric characters of every fixed point of a factor.
std::vector<Rational> numeric_characters(const SpaceFactor& f, std::span<const Rational> point) {
    Rational a = f.w0.evaluate(point), b = f.w1.evaluate(point);
    std::vector<Rational> chi;
    for (unsigned k = 0; k <= f.degree; ++k) chi.push_back(Rational(k) * a + Rational(f.degree - k) * b);
    return chi;
}

// Product of tangent weights chi_i - chi_k over k != i.
Rational numeric_euler(const std::vector<Rational>& chi, unsigned i) {
    Rational e = 1;
    for (unsigned k = 0; k < chi.size(); ++k)
        if (k != i) e *= chi[i] - chi[k];
    return e;
}

}  // namespace

bool specialize_oracle(const MapDescriptor& map, const Poly& cls, const Poly& claimed, unsigned trials,
                       std::uint64_t seed) {
    const SpaceDescriptor& src = map.source();
    const SpaceDescriptor& tgt = map.target();
    const TablePtr& tab = src.table();
    if (!claimed.table()->same_as(*tab)) return false;

    std::set<std::size_t> hvars;
    for (const auto& f : src.factors()) hvars.insert(tab->index(f.h_var));
    for (const auto& f : tgt.factors()) hvars.insert(tab->index(f.h_var));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> value(-40, 40);
    const std::vector<FixedPoint> points = enumerate_fixed_points(src);

    for (unsigned trial = 0; trial < trials; ++trial) {
        std::vector<Rational> point(tab->size(), Rational(0));
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            for (std::size_t v = 0; v < tab->size(); ++v)
                point[v] = hvars.count(v) ? Rational(0) : Rational(value(rng));
            ok = true;
            for (const auto& f : src.factors())
                if (f.w0.evaluate(point) == f.w1.evaluate(point)) ok = false;
        }
        if (!ok) return false;

        std::vector<std::vector<Rational>> src_chi, tgt_chi;
        for (const auto& f : src.factors()) src_chi.push_back(numeric_characters(f, point));
        for (const auto& f : tgt.factors()) tgt_chi.push_back(numeric_characters(f, point));

        FixedPoint chosen;
        for (const auto& f : tgt.factors())
            chosen.push_back(std::uniform_int_distribution<unsigned>(0, f.degree)(rng));

        Rational target_euler = 1;
        std::vector<Rational> at_target = point;
        for (std::size_t c = 0; c < tgt.size(); ++c) {
            target_euler *= numeric_euler(tgt_chi[c], chosen[c]);
            at_target[tab->index(tgt.factors()[c].h_var)] = tgt_chi[c][chosen[c]];
        }

        Rational sum = 0;
        for (const auto& fp : points) {
            if (map_image_fixed_point(map, fp) != chosen) continue;
            std::vector<Rational> at_source = point;
            Rational source_euler = 1;
            for (std::size_t j = 0; j < src.size(); ++j) {
                at_source[tab->index(src.factors()[j].h_var)] = src_chi[j][fp[j]];
                source_euler *= numeric_euler(src_chi[j], fp[j]);
            }
            sum += cls.evaluate(at_source) * target_euler / source_euler;
        }
        if (sum != claimed.evaluate(at_target)) return false;
    }
    return true;
}

bool specialize_oracle(const MapDescriptor& map, const Poly& cls, unsigned trials, std::uint64_t seed) {
    Poly claimed;
    try {
        claimed = pushforward(map, cls, ExecutionPolicy::Serial);
    } catch (const DenominatorResidue&) {
        return false;
    }
    return specialize_oracle(map, cls, claimed, trials, seed);
}

}  // namespace equichow
