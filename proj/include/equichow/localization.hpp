#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "equichow/poly.hpp"

namespace equichow {

// Serial paths are the reference implementation; Parallel uses OpenMP.
enum class ExecutionPolicy { Serial, Parallel };

// One factor P(Sym^d E^∨) of a product space, with torus weights (w0, w1) on
// the two coordinates and its hyperplane-class variable.
struct SpaceFactor {
    unsigned degree = 1;
    Poly w0;
    Poly w1;
    std::string h_var;
};

class SpaceDescriptor {
public:
    SpaceDescriptor() = default;
    explicit SpaceDescriptor(std::vector<SpaceFactor> factors);  // validates

    const std::vector<SpaceFactor>& factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    const TablePtr& table() const { return factors_.front().w0.table(); }
    unsigned dimension() const;

private:
    std::vector<SpaceFactor> factors_;
};

// Index i_j per factor: the point x0^{i_j} x1^{d_j - i_j}.
using FixedPoint = std::vector<unsigned>;

std::vector<FixedPoint> enumerate_fixed_points(const SpaceDescriptor& space);

// Π_j Π_{k != i_j} (h_j - k w0_j - (d_j - k) w1_j)
Poly point_class(const SpaceDescriptor& space, const FixedPoint& fp);

// i w0 + (d - i) w1 for the chosen factor.
Poly restrict_hyperplane(const SpaceDescriptor& space, const FixedPoint& fp, std::size_t factor);

// constant * Π forms[k]^{multiplicity}; forms are primitive linear polys with
// positive leading coefficient, pairwise distinct.
struct DenominatorForm {
    Integer constant = 1;
    std::vector<std::pair<Poly, unsigned>> forms;

    void multiply_form(const Poly& linear, unsigned multiplicity);
    Poly expand(const TablePtr& table) const;
};

// Top Chern class of the tangent space at a fixed point.
DenominatorForm tangent_euler(const SpaceDescriptor& space, const FixedPoint& fp);

struct LocalizedElement {
    Poly numerator;
    DenominatorForm denominator;

    friend bool operator==(const LocalizedElement& a, const LocalizedElement& b);
};

// A multiplication map (f_j) -> Π f_j^{a_j} from some source factors into one
// target factor of degree Σ a_j d_j.
struct MapComponent {
    std::vector<std::size_t> source_factors;
    std::vector<unsigned> exponents;
    std::string target_h;
};

// Either one component covering all source factors, or a factorwise product
// map (one component per source factor).
class MapDescriptor {
public:
    MapDescriptor() = default;
    MapDescriptor(SpaceDescriptor source, std::vector<MapComponent> components);  // validates

    static MapDescriptor multiplication(SpaceDescriptor source, std::vector<unsigned> exponents,
                                        std::string target_h = "h");
    static MapDescriptor product(SpaceDescriptor source, std::vector<unsigned> exponents,
                                 std::vector<std::string> target_h = {});

    const SpaceDescriptor& source() const { return source_; }
    const SpaceDescriptor& target() const { return target_; }
    const std::vector<MapComponent>& components() const { return components_; }

private:
    SpaceDescriptor source_;
    SpaceDescriptor target_;
    std::vector<MapComponent> components_;
};

FixedPoint map_image_fixed_point(const MapDescriptor& map, const FixedPoint& fp);

// Substitutes the hyperplane restrictions of every source factor.
Poly restrict_class(const SpaceDescriptor& space, const FixedPoint& fp, const Poly& cls);

// One summand of the localization sum, before cancellation.
LocalizedElement localization_summand(const MapDescriptor& map, const FixedPoint& fp, const Poly& cls);

// Equivariant pushforward by the fixed-point formula. Throws DenominatorResidue
// if the sum is not a polynomial.
Poly pushforward(const MapDescriptor& map, const Poly& cls, ExecutionPolicy policy = ExecutionPolicy::Parallel);

// Randomized check of a claimed pushforward: at random integer weights, and
// with each target hyperplane class set to its value at a random target fixed
// point, the exact rational localization sum must equal the claim.
bool specialize_oracle(const MapDescriptor& map, const Poly& cls, const Poly& claimed, unsigned trials,
                       std::uint64_t seed);
bool specialize_oracle(const MapDescriptor& map, const Poly& cls, unsigned trials, std::uint64_t seed);

}  // namespace equichow
