#include "equichow/poly.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace equichow {

// ---------------------------------------------------------------------------
// VarTable

std::shared_ptr<const VarTable> VarTable::make(std::vector<Var> vars) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (v.name.empty()) throw InvalidInput("empty variable name");
        if (v.degree < 1) throw InvalidInput("variable '" + v.name + "' has degree 0");
        if (!seen.insert(v.name).second)
            throw InvalidInput("duplicate variable '" + v.name + "'");
    }
    return std::shared_ptr<const VarTable>(new VarTable(std::move(vars)));
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return i;
    return std::nullopt;
}

std::size_t VarTable::index(std::string_view name) const {
    auto i = find(name);
    if (!i) throw InvalidInput("unknown variable '" + std::string(name) + "'");
    return *i;
}

bool VarTable::same_as(const VarTable& other) const {
    if (this == &other) return true;
    if (vars_.size() != other.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != other.vars_[i].name || vars_[i].degree != other.vars_[i].degree)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Monomials

unsigned monomial_grade(const Exponents& e, const VarTable& table) {
    unsigned g = 0;
    for (std::size_t i = 0; i < e.size(); ++i) g += e[i] * table[i].degree;
    return g;
}

bool canonical_before(const Exponents& a, const Exponents& b, const VarTable& table) {
    unsigned ga = monomial_grade(a, table), gb = monomial_grade(b, table);
    if (ga != gb) return ga > gb;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(TablePtr table, const Integer& c) {
    Poly p(table);
    if (c != 0) p.terms_.push_back({Exponents(table->size(), 0), c});
    return p;
}

Poly Poly::variable(TablePtr table, std::string_view name) {
    std::size_t i = table->index(name);
    return variable(std::move(table), i);
}

Poly Poly::variable(TablePtr table, std::size_t index) {
    if (index >= table->size()) throw InvalidInput("variable index out of range");
    Exponents e(table->size(), 0);
    e[index] = 1;
    return monomial(std::move(table), std::move(e));
}

Poly Poly::monomial(TablePtr table, Exponents exps, const Integer& c) {
    if (exps.size() != table->size()) throw InvalidInput("exponent vector length mismatch");
    Poly p(std::move(table));
    if (c != 0) p.terms_.push_back({std::move(exps), c});
    return p;
}

Poly Poly::from_terms(TablePtr table, std::vector<Term> terms) {
    Poly p(std::move(table));
    for (const auto& t : terms)
        if (t.exps.size() != p.table_->size())
            throw InvalidInput("exponent vector length mismatch");
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

void Poly::normalize() {
    const VarTable& tab = *table_;
    std::sort(terms_.begin(), terms_.end(), [&](const Term& a, const Term& b) {
        return canonical_before(a.exps, b.exps, tab);
    });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().exps == t.exps)
            out.back().coeff += t.coeff;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(out);
}

void Poly::check_table(const Poly& o) const {
    if (!table_ || !o.table_) throw InvalidInput("poly without variable table");
    if (!table_->same_as(*o.table_)) throw InvalidInput("variable table mismatch");
}

bool Poly::is_homogeneous() const { return is_zero() || grade().has_value(); }

std::optional<unsigned> Poly::grade() const {
    if (terms_.empty()) return std::nullopt;
    unsigned g = monomial_grade(terms_.front().exps, *table_);
    for (const auto& t : terms_)
        if (monomial_grade(t.exps, *table_) != g) return std::nullopt;
    return g;
}

unsigned Poly::max_grade() const {
    // canonical order is graded, so the first term has the top grade
    return terms_.empty() ? 0 : monomial_grade(terms_.front().exps, *table_);
}

Integer Poly::coefficient(const Exponents& e) const {
    for (const auto& t : terms_)
        if (t.exps == e) return t.coeff;
    return 0;
}

bool Poly::involves(std::size_t var) const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [var](const Term& t) { return t.exps[var] != 0; });
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

namespace {

// Merge two canonical term lists, b scaled by sign.
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, int sign,
                              const VarTable& tab) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && canonical_before(a[i].exps, b[j].exps, tab))) {
            out.push_back(a[i++]);
        } else if (i == a.size() || canonical_before(b[j].exps, a[i].exps, tab)) {
            out.push_back(b[j++]);
            if (sign < 0) out.back().coeff = -out.back().coeff;
        } else {
            Integer c = sign < 0 ? Integer(a[i].coeff - b[j].coeff) : Integer(a[i].coeff + b[j].coeff);
            if (c != 0) out.push_back({a[i].exps, std::move(c)});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
    check_table(o);
    terms_ = merge_terms(terms_, o.terms_, +1, *table_);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    check_table(o);
    terms_ = merge_terms(terms_, o.terms_, -1, *table_);
    return *this;
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly& Poly::operator*=(const Integer& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    a.check_table(b);
    std::vector<Term> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    const std::size_t n = a.table_->size();
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            Exponents e(n);
            for (std::size_t k = 0; k < n; ++k) e[k] = s.exps[k] + t.exps[k];
            prod.push_back({std::move(e), s.coeff * t.coeff});
        }
    }
    return Poly::from_terms(a.table_, std::move(prod));
}

bool operator==(const Poly& a, const Poly& b) {
    if (!a.table_ || !b.table_) return a.terms_.empty() && b.terms_.empty();
    if (!a.table_->same_as(*b.table_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff)
            return false;
    return true;
}

Poly Poly::pow(unsigned n) const {
    Poly result = constant(table_, 1);
    Poly base = *this;
    while (n) {
        if (n & 1u) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

Poly Poly::rebase(const TablePtr& target) const {
    if (table_->same_as(*target)) {
        Poly r = *this;
        r.table_ = target;
        return r;
    }
    // only variables that actually occur need a counterpart
    std::vector<std::size_t> map(table_->size());
    for (std::size_t i = 0; i < table_->size(); ++i) {
        if (!involves(i)) continue;
        map[i] = target->index((*table_)[i].name);
        if ((*target)[map[i]].degree != (*table_)[i].degree)
            throw InvalidInput("degree of '" + (*table_)[i].name + "' differs in target table");
    }
    std::vector<Term> out;
    for (const auto& t : terms_) {
        Exponents e(target->size(), 0);
        for (std::size_t i = 0; i < t.exps.size(); ++i)
            if (t.exps[i]) e[map[i]] = t.exps[i];
        out.push_back({std::move(e), t.coeff});
    }
    return from_terms(target, std::move(out));
}

Rational Poly::evaluate(std::span<const Rational> point) const {
    if (point.size() != table_->size()) throw InvalidInput("evaluation point has wrong length");
    Rational sum = 0;
    for (const auto& t : terms_) {
        Rational v = t.coeff;
        for (std::size_t i = 0; i < t.exps.size(); ++i)
            for (std::uint32_t k = 0; k < t.exps[i]; ++k) v *= point[i];
        sum += v;
    }
    return sum;
}

std::string Poly::to_string() const { return render(*this); }

// ---------------------------------------------------------------------------
// Free operations

Poly mul(const Poly& p, const Poly& q) { return p * q; }

Poly compose(const Poly& p, std::span<const Poly> images, const TablePtr& target) {
    if (images.size() != p.table()->size())
        throw InvalidInput("compose: need one image per source variable");
    for (const auto& img : images)
        if (!img.table()->same_as(*target)) throw InvalidInput("compose: image over wrong table");

    // cache powers per variable
    std::vector<std::vector<Poly>> powers(images.size());
    auto power = [&](std::size_t v, std::uint32_t k) -> const Poly& {
        auto& cache = powers[v];
        if (cache.empty()) cache.push_back(Poly::constant(target, 1));
        while (cache.size() <= k) cache.push_back(cache.back() * images[v]);
        return cache[k];
    };

    Poly result(target);
    for (const auto& t : p.terms()) {
        Poly term = Poly::constant(target, t.coeff);
        for (std::size_t v = 0; v < t.exps.size(); ++v)
            if (t.exps[v]) term = term * power(v, t.exps[v]);
        result += term;
    }
    return result;
}

Poly substitute(const Poly& p, const std::map<std::string, Poly>& assignment) {
    const TablePtr& tab = p.table();
    std::vector<Poly> images;
    images.reserve(tab->size());
    for (std::size_t i = 0; i < tab->size(); ++i) images.push_back(Poly::variable(tab, i));
    for (const auto& [name, img] : assignment) {
        std::size_t i = tab->index(name);
        if (!img.table()->same_as(*tab)) throw InvalidInput("substitute: image over wrong table");
        if (!img.is_zero()) {
            auto g = img.grade();
            if (!g || *g != (*tab)[i].degree)
                throw InvalidInput("substitute: image of '" + name + "' is not homogeneous of grade " +
                                   std::to_string((*tab)[i].degree));
        }
        images[i] = img;
    }
    return compose(p, images, tab);
}

Poly graded_component(const Poly& p, unsigned n) {
    std::vector<Term> out;
    for (const auto& t : p.terms())
        if (monomial_grade(t.exps, *p.table()) == n) out.push_back(t);
    return Poly::from_terms(p.table(), std::move(out));
}

std::optional<Poly> exact_divide(const Poly& p, const Poly& q) {
    if (q.is_zero()) throw InvalidInput("exact_divide: division by zero");
    if (!p.table()->same_as(*q.table())) throw InvalidInput("variable table mismatch");
    const TablePtr& tab = p.table();
    const Term& lead = q.terms().front();
    std::vector<Term> quotient;
    Poly rest = p;
    while (!rest.is_zero()) {
        const Term& t = rest.terms().front();
        Exponents e(tab->size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (t.exps[i] < lead.exps[i]) return std::nullopt;
            e[i] = t.exps[i] - lead.exps[i];
        }
        if (!mpz_divisible_p(t.coeff.get_mpz_t(), lead.coeff.get_mpz_t())) return std::nullopt;
        Integer c = t.coeff / lead.coeff;
        Poly step = Poly::monomial(tab, e, c);
        rest -= step * q;
        quotient.push_back({std::move(e), std::move(c)});
    }
    return Poly::from_terms(tab, std::move(quotient));
}

std::optional<Poly> to_elementary_symmetric(const Poly& p,
                                            std::pair<std::string, std::string> pair,
                                            std::pair<std::string, std::string> targets) {
    const TablePtr& tab = p.table();
    const std::size_t a = tab->index(pair.first), b = tab->index(pair.second);
    const std::size_t s = tab->index(targets.first), e2 = tab->index(targets.second);
    if (a == b) throw InvalidInput("symmetric pair must be two distinct variables");
    if ((*tab)[a].degree != 1 || (*tab)[b].degree != 1)
        throw InvalidInput("symmetric pair must have degree 1");
    if ((*tab)[s].degree != 1 || (*tab)[e2].degree != 2)
        throw InvalidInput("targets must have degrees 1 and 2");

    std::map<std::string, Poly> swap{{pair.first, Poly::variable(tab, b)},
                                     {pair.second, Poly::variable(tab, a)}};
    if (!(substitute(p, swap) == p)) return std::nullopt;

    const Poly e1 = Poly::variable(tab, a) + Poly::variable(tab, b);
    const Poly e2p = Poly::variable(tab, a) * Poly::variable(tab, b);

    Poly rest = p;
    std::vector<Term> out;
    while (!rest.is_zero()) {
        // term with the lexicographically largest (exp_a, exp_b)
        const Term* best = &rest.terms().front();
        for (const auto& t : rest.terms())
            if (std::pair(t.exps[a], t.exps[b]) > std::pair(best->exps[a], best->exps[b])) best = &t;
        const std::uint32_t ea = best->exps[a], eb = best->exps[b];
        if (ea < eb) return std::nullopt;  // unreachable for symmetric input
        Exponents scalar = best->exps;
        scalar[a] = 0;
        scalar[b] = 0;
        Integer c = best->coeff;

        Poly basis = Poly::monomial(tab, scalar, c) * e1.pow(ea - eb) * e2p.pow(eb);
        Exponents target = scalar;
        target[s] += ea - eb;
        target[e2] += eb;
        out.push_back({std::move(target), c});
        rest -= basis;
    }
    return Poly::from_terms(tab, std::move(out));
}

// ---------------------------------------------------------------------------
// Text

std::string render(const Poly& p) {
    if (p.is_zero()) return "0";
    const VarTable& tab = *p.table();
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        Integer mag = abs(t.coeff);
        if (first) {
            if (t.coeff < 0) os << '-';
        } else {
            os << (t.coeff < 0 ? " - " : " + ");
        }
        first = false;

        std::string mono;
        for (std::size_t i = 0; i < t.exps.size(); ++i) {
            if (!t.exps[i]) continue;
            if (!mono.empty()) mono += '*';
            mono += tab[i].name;
            if (t.exps[i] > 1) mono += '^' + std::to_string(t.exps[i]);
        }
        if (mono.empty()) {
            os << mag.get_str();
        } else if (mag == 1) {
            os << mono;
        } else {
            os << mag.get_str() << '*' << mono;
        }
    }
    return os.str();
}

namespace {

class Parser {
public:
    Parser(std::string_view text, const TablePtr& table) : text_(text), table_(table) {}

    Poly parse() {
        skip_ws();
        if (pos_ == text_.size()) fail("empty polynomial");
        Poly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Poly expr() {
        Poly acc = term();
        for (;;) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                return acc;
        }
    }

    Poly term() {
        Poly acc = unary();
        while (accept('*')) acc = acc * unary();
        return acc;
    }

    Poly unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Poly power() {
        Poly base = atom();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            unsigned long n = std::stoul(std::string(text_.substr(start, pos_ - start)));
            return base.pow(static_cast<unsigned>(n));
        }
        return base;
    }

    Poly atom() {
        skip_ws();
        if (pos_ == text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return Poly::constant(table_, Integer(std::string(text_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            auto idx = table_->find(name);
            if (!idx) {
                pos_ = start;
                fail("unknown variable '" + std::string(name) + "'");
            }
            return Poly::variable(table_, *idx);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const TablePtr& table_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, const TablePtr& table) { return Parser(text, table).parse(); }

}  // namespace equichow
