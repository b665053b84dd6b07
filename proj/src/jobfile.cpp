#include "equichow/jobfile.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace equichow {

namespace {

struct Line {
    std::size_t no;
    std::size_t col;  // 1-based column where `text` starts
    std::string text;
};

struct Section {
    std::string name;
    std::vector<std::string> args;
    std::size_t no;
    std::vector<Line> lines;
};

std::vector<std::pair<std::size_t, std::string>> tokens(const std::string& s) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(start, s.substr(start, i - start));
    }
    return out;
}

std::vector<Section> split_sections(const std::string& text) {
    std::vector<Section> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
        ++no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t e = raw.find_last_not_of(" \t\r");
        std::string body = raw.substr(b, e - b + 1);
        if (body.front() == '[') {
            if (body.back() != ']') throw ParseError("unterminated section header", no, b + body.size() + 1);
            auto parts = tokens(body.substr(1, body.size() - 2));
            if (parts.empty()) throw ParseError("empty section header", no, b + 1);
            Section s{parts[0].second, {}, no, {}};
            for (std::size_t k = 1; k < parts.size(); ++k) s.args.push_back(parts[k].second);
            out.push_back(std::move(s));
            continue;
        }
        if (out.empty()) throw ParseError("content before the first section", no, b + 1);
        out.back().lines.push_back({no, b + 1, body});
    }
    return out;
}

unsigned parse_count(const std::string& s, std::size_t no, std::size_t col) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ParseError("expected a non-negative integer, got '" + s + "'", no, col);
    return v;
}

std::uint64_t parse_u64(const std::string& s, std::size_t no, std::size_t col) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw ParseError("expected a non-negative integer, got '" + s + "'", no, col);
    return v;
}

// Polynomial at a given position; diagnostics point into the file.
Poly poly_at(const std::string& s, const TablePtr& table, std::size_t no, std::size_t col) {
    try {
        return parse_poly(s, table);
    } catch (const ParseError& e) {
        throw ParseError(e.message(), no, col + e.column() - 1);
    } catch (const InvalidInput& e) {
        throw ParseError(e.what(), no, col);
    }
}

// `key = value`; returns (key, value, column of value).
std::tuple<std::string, std::string, std::size_t> key_value(const Line& ln) {
    auto eq = ln.text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", ln.no, ln.col);
    std::string key = ln.text.substr(0, eq);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
    std::size_t v = eq + 1;
    while (v < ln.text.size() && std::isspace(static_cast<unsigned char>(ln.text[v]))) ++v;
    return {key, ln.text.substr(v), ln.col + v};
}

TablePtr parse_vars(const Section& s) {
    std::vector<VarTable::Var> vars;
    for (const auto& ln : s.lines) {
        auto t = tokens(ln.text);
        if (t.size() != 2) throw ParseError("expected 'name degree'", ln.no, ln.col);
        vars.push_back({t[0].second, parse_count(t[1].second, ln.no, ln.col + t[1].first)});
    }
    try {
        return VarTable::make(std::move(vars));
    } catch (const InvalidInput& e) {
        throw ParseError(e.what(), s.no, 1);
    }
}

const Section* find_section(const std::vector<Section>& secs, const std::string& name) {
    const Section* found = nullptr;
    for (const auto& s : secs) {
        if (s.name != name) continue;
        if (found) throw ParseError("duplicate section [" + name + "]", s.no, 1);
        found = &s;
    }
    return found;
}

void check_known(const std::vector<Section>& secs, std::initializer_list<const char*> known) {
    for (const auto& s : secs) {
        bool ok = false;
        for (const char* k : known) ok = ok || s.name == k;
        if (!ok) throw ParseError("unknown section [" + s.name + "]", s.no, 1);
    }
}

std::string compact(const Poly& p) {
    std::string s = render(p), out;
    for (char c : s)
        if (c != ' ') out += c;
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Jobs

MapDescriptor JobFile::map() const {
    SpaceDescriptor src(factors);
    if (product) return MapDescriptor::product(std::move(src), exponents, target_h);
    if (target_h.size() > 1) throw InvalidInput("a multiplication map has a single target variable");
    return MapDescriptor::multiplication(std::move(src), exponents, target_h.empty() ? "h" : target_h.front());
}

bool operator==(const JobFile& a, const JobFile& b) {
    if (!a.table || !b.table || !a.table->same_as(*b.table)) return false;
    if (a.factors.size() != b.factors.size()) return false;
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        const auto &x = a.factors[i], &y = b.factors[i];
        if (x.degree != y.degree || !(x.w0 == y.w0) || !(x.w1 == y.w1) || x.h_var != y.h_var) return false;
    }
    return a.exponents == b.exponents && a.product == b.product && a.target_h == b.target_h && a.cls == b.cls &&
           a.degree_bound == b.degree_bound && a.oracle_trials == b.oracle_trials && a.seed == b.seed;
}

JobFile parse_job(const std::string& text) {
    auto secs = split_sections(text);
    check_known(secs, {"vars", "space", "map", "class", "options"});
    JobFile job;

    const Section* vars = find_section(secs, "vars");
    if (!vars) throw ParseError("missing [vars] section", 1, 1);
    job.table = parse_vars(*vars);

    const Section* space = find_section(secs, "space");
    if (!space || space->lines.empty()) throw ParseError("missing [space] factors", space ? space->no : 1, 1);
    for (const auto& ln : space->lines) {
        auto t = tokens(ln.text);
        if (t.empty() || t[0].second != "factor") throw ParseError("expected 'factor ...'", ln.no, ln.col);
        SpaceFactor f;
        std::set<std::string> seen;
        for (std::size_t k = 1; k < t.size(); ++k) {
            const std::size_t col = ln.col + t[k].first;
            const std::string& tok = t[k].second;
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw ParseError("expected key=value", ln.no, col);
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", ln.no, col);
            if (key == "d")
                f.degree = parse_count(val, ln.no, col + eq + 1);
            else if (key == "w0")
                f.w0 = poly_at(val, job.table, ln.no, col + eq + 1);
            else if (key == "w1")
                f.w1 = poly_at(val, job.table, ln.no, col + eq + 1);
            else if (key == "h")
                f.h_var = val;
            else
                throw ParseError("unknown factor key '" + key + "'", ln.no, col);
        }
        for (const char* k : {"d", "w0", "w1", "h"})
            if (!seen.count(k)) throw ParseError(std::string("factor is missing '") + k + "'", ln.no, ln.col);
        job.factors.push_back(std::move(f));
    }

    const Section* map = find_section(secs, "map");
    if (!map) throw ParseError("missing [map] section", 1, 1);
    for (const auto& ln : map->lines) {
        if (ln.text == "product") {
            job.product = true;
            continue;
        }
        auto [key, val, col] = key_value(ln);
        if (key == "exponents") {
            for (const auto& [off, tok] : tokens(val)) job.exponents.push_back(parse_count(tok, ln.no, col + off));
        } else if (key == "target_h") {
            for (const auto& [off, tok] : tokens(val)) job.target_h.push_back(tok);
        } else {
            throw ParseError("unknown map key '" + key + "'", ln.no, ln.col);
        }
    }
    if (job.exponents.empty()) throw ParseError("map needs 'exponents = ...'", map->no, 1);

    job.cls = Poly::constant(job.table, 1);
    if (const Section* cls = find_section(secs, "class")) {
        if (cls->lines.size() != 1) throw ParseError("[class] holds exactly one polynomial", cls->no, 1);
        const Line& ln = cls->lines.front();
        job.cls = poly_at(ln.text, job.table, ln.no, ln.col);
    }

    if (const Section* opt = find_section(secs, "options")) {
        for (const auto& ln : opt->lines) {
            auto [key, val, col] = key_value(ln);
            if (key == "degree_bound")
                job.degree_bound = parse_count(val, ln.no, col);
            else if (key == "oracle_trials")
                job.oracle_trials = parse_count(val, ln.no, col);
            else if (key == "seed")
                job.seed = parse_u64(val, ln.no, col);
            else
                throw ParseError("unknown option '" + key + "'", ln.no, ln.col);
        }
    }
    return job;
}

std::string render_job(const JobFile& job) {
    std::ostringstream out;
    out << "[vars]\n";
    for (const auto& v : job.table->vars()) out << v.name << ' ' << v.degree << '\n';
    out << "\n[space]\n";
    for (const auto& f : job.factors)
        out << "factor d=" << f.degree << " w0=" << compact(f.w0) << " w1=" << compact(f.w1) << " h=" << f.h_var
            << '\n';
    out << "\n[map]\nexponents =";
    for (unsigned a : job.exponents) out << ' ' << a;
    out << '\n';
    if (job.product) out << "product\n";
    if (!job.target_h.empty()) {
        out << "target_h =";
        for (const auto& h : job.target_h) out << ' ' << h;
        out << '\n';
    }
    out << "\n[class]\n" << render(job.cls) << '\n';
    if (job.degree_bound || job.oracle_trials || job.seed) {
        out << "\n[options]\n";
        if (job.degree_bound) out << "degree_bound = " << *job.degree_bound << '\n';
        if (job.oracle_trials) out << "oracle_trials = " << *job.oracle_trials << '\n';
        if (job.seed) out << "seed = " << *job.seed << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Ideal files

IdealFile parse_ideal_file(const std::string& text) {
    auto secs = split_sections(text);
    check_known(secs, {"vars", "ideal"});
    const Section* vars = find_section(secs, "vars");
    if (!vars) throw ParseError("missing [vars] section", 1, 1);
    IdealFile f{parse_vars(*vars), {}};
    if (const Section* ideal = find_section(secs, "ideal"))
        for (const auto& ln : ideal->lines) f.generators.push_back(poly_at(ln.text, f.table, ln.no, ln.col));
    return f;
}

// ---------------------------------------------------------------------------
// Square files

SquareFile parse_square_file(const std::string& text) {
    auto secs = split_sections(text);
    std::map<std::string, RingPresentation> rings;
    std::map<std::pair<std::string, std::string>, const Section*> homs;
    std::optional<unsigned> bound;

    for (const auto& s : secs) {
        if (s.name == "ring") {
            if (s.args.size() != 1) throw ParseError("expected [ring NAME]", s.no, 1);
            if (rings.count(s.args[0])) throw ParseError("duplicate ring '" + s.args[0] + "'", s.no, 1);
            RingPresentation pres;
            for (const auto& ln : s.lines) {
                auto [key, val, col] = key_value(ln);
                if (key == "vars") {
                    if (pres.table) throw ParseError("duplicate 'vars'", ln.no, ln.col);
                    std::vector<VarTable::Var> vars;
                    for (const auto& [off, tok] : tokens(val)) {
                        auto colon = tok.find(':');
                        if (colon == std::string::npos) throw ParseError("expected name:degree", ln.no, col + off);
                        vars.push_back({tok.substr(0, colon),
                                        parse_count(tok.substr(colon + 1), ln.no, col + off + colon + 1)});
                    }
                    try {
                        pres.table = VarTable::make(std::move(vars));
                    } catch (const InvalidInput& e) {
                        throw ParseError(e.what(), ln.no, col);
                    }
                } else if (key == "rel") {
                    if (!pres.table) throw ParseError("'vars' must come before relations", ln.no, ln.col);
                    pres.relations.push_back(poly_at(val, pres.table, ln.no, col));
                } else {
                    throw ParseError("unknown ring key '" + key + "'", ln.no, ln.col);
                }
            }
            if (!pres.table) throw ParseError("ring without 'vars'", s.no, 1);
            try {
                pres.check_homogeneous();
            } catch (const InvalidInput& e) {
                throw ParseError(e.what(), s.no, 1);
            }
            rings.emplace(s.args[0], std::move(pres));
        } else if (s.name == "hom") {
            if (s.args.size() != 2) throw ParseError("expected [hom SOURCE TARGET]", s.no, 1);
            if (!homs.emplace(std::make_pair(s.args[0], s.args[1]), &s).second)
                throw ParseError("duplicate hom", s.no, 1);
        } else if (s.name == "options") {
            for (const auto& ln : s.lines) {
                auto [key, val, col] = key_value(ln);
                if (key != "degree_bound") throw ParseError("unknown option '" + key + "'", ln.no, ln.col);
                bound = parse_count(val, ln.no, col);
            }
        } else {
            throw ParseError("unknown section [" + s.name + "]", s.no, 1);
        }
    }

    for (const char* r : {"A", "B", "C", "D"})
        if (!rings.count(r)) throw ParseError(std::string("missing [ring ") + r + "]", 1, 1);
    auto build = [&](const char* src, const char* dst) {
        auto it = homs.find({src, dst});
        if (it == homs.end()) throw ParseError(std::string("missing [hom ") + src + " " + dst + "]", 1, 1);
        const RingPresentation& target = rings.at(dst);
        std::map<std::string, Poly> images;
        for (const auto& ln : it->second->lines) {
            auto [key, val, col] = key_value(ln);
            images[key] = poly_at(val, target.table, ln.no, col);
        }
        return RingHom(rings.at(src), target, images);
    };
    return SquareFile{{build("A", "B"), build("A", "C"), build("B", "D"), build("C", "D")}, bound};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace equichow
