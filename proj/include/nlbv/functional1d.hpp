#pragma once

// Certified enclosures of nu_gamma(E') and F = 2 lambda nu_gamma(E') for 1D BV
// functions, where E' = {x < y : |u(y) - u(x)| > lambda (y - x)^(1+gamma)}.
//
// The exceedance set is explored by best-first branch-and-bound over boxes in
// (x, h = y - x) coordinates. Each box gets affine-in-h bounds
//     Lo(h) <= u(x + h) - u(x) <= Hi(h)
// assembled piece by piece, and is certified Inside when one of Lo, -Hi beats
// lambda h^(1+gamma) on the whole box, Outside when both stay below it.
// Box masses are exact (the kernel is integrated analytically in h).

#include <cstddef>
#include <stdexcept>

#include "nlbv/bvmodel.hpp"
#include "nlbv/numeasure.hpp"

namespace nlbv {

struct ExceedanceQuery {
    double gamma = 1.0;
    double lambda = 1.0;
    double tol = 1e-4;          ///< target width of the F enclosure
    int max_depth = 40;         ///< bisections allowed per axis
    std::size_t max_boxes = 4'000'000;  ///< split budget

    void validate() const;
};

/// 1e-4 * max(1, scale), scale being the liminf right-hand side C_1 (a/g + j/(1+g) + g c/(2(1+2g)(1+g))).
double default_tolerance(const BVFunction1D& u, double gamma);
ExceedanceQuery default_query(const BVFunction1D& u, double gamma, double lambda);

struct Evaluation {
    Enclosure enclosure;
    bool tolerance_met = true;
    std::size_t splits = 0;
};

/// Raised by truncation_radius for a constant function; F is then exactly 0.
class ConstantFunctionError : public std::domain_error {
public:
    ConstantFunctionError() : std::domain_error("u is constant: exceedance set is empty and F = 0") {}
};

/// (|Du|(R) / lambda)^(1/(1+gamma)); no exceedance pair has y - x beyond it.
double truncation_radius(const BVFunction1D& u, const ExceedanceQuery& q);

/// a + b h
struct AffineBound {
    double a = 0.0;
    double b = 0.0;
    [[nodiscard]] double at(double h) const noexcept { return a + b * h; }
};

struct IncrementBounds {
    AffineBound lower;
    AffineBound upper;
};

/// Bounds on u(x + h) - u(x) valid for every (x, h) in the box.
IncrementBounds increment_bounds(const BVFunction1D& u, const PlaneBox& box);

BoxVerdict classify_box(const BVFunction1D& u, const PlaneBox& box, const ExceedanceQuery& q);

/// Enclosure of nu_gamma(E'_{gamma,lambda}(u)).
Evaluation measure_exceedance(const BVFunction1D& u, const ExceedanceQuery& q);

/// Enclosure of F_{gamma,lambda}(u) = 2 lambda nu_gamma(E').
Evaluation F_value(const BVFunction1D& u, const ExceedanceQuery& q);

/// Exact F for a single jump of size J on the line: 2 J / (1 + gamma).
double closed_form_jump_F(double J, double gamma);

}  // namespace nlbv
