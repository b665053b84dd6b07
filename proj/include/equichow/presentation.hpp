#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "equichow/ideal.hpp"
#include "equichow/localization.hpp"

namespace equichow {

// Graded homomorphism between presented rings, given by generator images.
// Construction checks grades and that every source relation lands in the
// target ideal.
class RingHom {
public:
    // Source variables missing from `images` map to the target variable of the
    // same name.
    RingHom(RingPresentation source, RingPresentation target, const std::map<std::string, Poly>& images,
            const MonomialOrder* target_order = nullptr);

    const RingPresentation& source() const { return source_; }
    const RingPresentation& target() const { return target_; }
    const std::vector<Poly>& images() const { return images_; }
    const IdealBasis& target_basis() const { return *target_basis_; }

    // Generator substitution without reduction.
    Poly lift(const Poly& p) const;

private:
    RingPresentation source_;
    RingPresentation target_;
    std::vector<Poly> images_;
    std::shared_ptr<const IdealBasis> target_basis_;
};

// Substitute, then normal form in the target.
Poly hom_apply(const RingHom& hom, const Poly& p);

// A -> B, A -> C, B -> D, C -> D.
struct CartesianSquareSpec {
    RingHom a_to_b;
    RingHom a_to_c;
    RingHom b_to_d;
    RingHom c_to_d;
};

struct CartesianDegreeReport {
    unsigned degree = 0;
    GroupInvariants a, b, c, d, fiber;
    bool surjective = false;
    bool injective = false;
    bool passed() const { return surjective && injective; }
};

struct CartesianReport {
    std::vector<CartesianDegreeReport> degrees;
    bool passed() const;
    // Lowest failing degree, if any.
    std::optional<unsigned> first_failure() const;
};

// Throws InvalidInput when the square does not commute on generators.
void check_commutes(const CartesianSquareSpec& square);

// Checks A_n -> B_n ×_{D_n} C_n is an isomorphism for n = 0..N.
CartesianReport verify_cartesian(const CartesianSquareSpec& square, unsigned max_degree,
                                 ExecutionPolicy policy = ExecutionPolicy::Parallel);

// "Z^4 + (Z/2)^3" style.
std::string render_group(const GroupInvariants& g);

// Multiplication by `elt` injective on every graded piece of degree <= N.
bool nonzerodivisor_up_to(const RingPresentation& pres, const Poly& elt, unsigned max_degree);

// Pushforward along a divisor whose ring is (base)[x]/(2x, x^2 + l x): the
// class 1 goes to the divisor class, x goes to the new generator, and the rest
// follows by linearity over the base.
class Gysin {
public:
    Gysin(RingPresentation divisor, RingPresentation ambient, std::string xi = "x", std::string divisor_class = "d1",
          std::string eta = "e");

    Poly operator()(const Poly& p) const;

    const RingPresentation& divisor() const { return divisor_; }
    const RingPresentation& ambient() const { return ambient_; }

    // a + b*x with a, b free of x (reduced modulo the divisor relations).
    std::pair<Poly, Poly> split(const Poly& p) const;

private:
    RingPresentation divisor_;
    RingPresentation ambient_;
    std::size_t xi_;
    Poly divisor_class_;
    Poly eta_;
    std::shared_ptr<const IdealBasis> divisor_basis_;
    std::shared_ptr<const IdealBasis> ambient_basis_;
};

Poly gysin_P1_to_P(const Gysin& gysin, const Poly& p);

struct CharacterBasis {
    TablePtr table;
    std::map<std::string, Poly> first_chern;
};

struct Character {
    std::shared_ptr<const CharacterBasis> basis;
    std::map<std::string, Integer> coefficients;
};

Poly c1_of_character(const Character& chi);

}  // namespace equichow
