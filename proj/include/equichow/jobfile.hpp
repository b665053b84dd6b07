#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "equichow/localization.hpp"
#include "equichow/presentation.hpp"

namespace equichow {

// Pushforward job:
//
//   [vars]      one `name degree` per line
//   [space]     factor d=<int> w0=<form> w1=<form> h=<name>
//   [map]       exponents = a1 a2 ...   | product | target_h = name ...
//   [class]     one polynomial (default 1)
//   [options]   degree_bound / oracle_trials / seed = <int>
struct JobFile {
    TablePtr table;
    std::vector<SpaceFactor> factors;
    std::vector<unsigned> exponents;
    bool product = false;
    std::vector<std::string> target_h;  // empty: default names
    Poly cls;
    std::optional<unsigned> degree_bound;
    std::optional<unsigned> oracle_trials;
    std::optional<std::uint64_t> seed;

    MapDescriptor map() const;  // throws InvalidInput on a malformed descriptor
    friend bool operator==(const JobFile& a, const JobFile& b);
};

JobFile parse_job(const std::string& text);
std::string render_job(const JobFile& job);

// Ideal file for normal forms: [vars] as above, [ideal] one generator per line.
struct IdealFile {
    TablePtr table;
    std::vector<Poly> generators;
};

IdealFile parse_ideal_file(const std::string& text);

// Square file:
//
//   [ring A]    vars = l1:1 l2:2 ...   and any number of  rel = <poly>
//   [hom A B]   <var> = <image poly>, unlisted variables keep their name
//   [options]   degree_bound = <int>
//
// Rings A, B, C, D and homs A B, A C, B D, C D are required.
struct SquareFile {
    CartesianSquareSpec square;
    std::optional<unsigned> degree_bound;
};

SquareFile parse_square_file(const std::string& text);

std::string read_file(const std::string& path);  // InvalidInput if unreadable

}  // namespace equichow
