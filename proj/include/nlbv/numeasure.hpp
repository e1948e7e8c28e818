#pragma once

// nu_gamma masses of plane regions in (x, h = y - x) coordinates, where the
// kernel |y - x|^(gamma - 1) becomes h^(gamma - 1) and integrates in closed
// form over any h-interval.

#include <functional>

#include "nlbv/types.hpp"

namespace nlbv {

/// The exponent gamma of the singular kernel; always > 0.
class Gamma {
public:
    explicit Gamma(double gamma) : value_(gamma)
    {
        require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0 (the functionals are studied for gamma > 0)");
    }
    [[nodiscard]] double value() const noexcept { return value_; }

private:
    double value_;
};

/// Axis-aligned box in (x, h) coordinates with 0 <= h.lo <= h.hi.
struct PlaneBox {
    Interval x;
    Interval h;
};

PlaneBox make_plane_box(Interval x, Interval h);

enum class BoxVerdict { inside, outside, mixed };

const char* to_string(BoxVerdict v) noexcept;

/// Integral of h^(gamma-1) over [h0, h1], computed without cancellation for thin intervals.
double kernel_mass(double h0, double h1, double gamma) noexcept;

/// nu of {(x,y): s - delta < x < s < y < x + delta} = delta^(1+g)/(1+g).
double nu_triangle(double delta, Gamma gamma);

/// nu of the curved region attached to one Cantor point with radius r:
/// g r^(1+g) / ((1+2g)(1+g)).
double nu_curved(double r, Gamma gamma);

/// nu of an axis-aligned (x,h) box: |x| (h_hi^g - h_lo^g) / g.
double nu_slab(const PlaneBox& box, Gamma gamma);

// --- oracles ---------------------------------------------------------------

/// Rigorous classification of a cell against a region.
using CellClassifier = std::function<BoxVerdict(const PlaneBox&)>;

/// Darboux-style enclosure on an n x n grid over `bounding`, refining only
/// boundary cells dyadically. Boundary cells count toward the upper sum only.
Enclosure nu_quadrature_oracle(const CellClassifier& region, const PlaneBox& bounding, Gamma gamma, int n);

/// h-section of a region at abscissa x (empty when hi <= lo).
using HSection = std::function<Interval(double x)>;

struct QuadratureValue {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// High-order route: integrate the analytic h-mass of each section over x
/// with tanh-sinh quadrature.
QuadratureValue nu_section_integral(const HSection& section, Interval x_range, Gamma gamma);

// --- canonical regions -----------------------------------------------------

/// Triangle {s - delta < x < s, s - x < h < delta} (a single jump at s).
CellClassifier triangle_region(double s, double delta);
HSection triangle_sections(double s, double delta);

/// Curved region of a Cantor point z with radius r:
/// {z - r < x < z < y < z + r, x > y - r^(g/(1+g)) (y - z)^(1/(1+g))}.
CellClassifier curved_region(double z, double r, Gamma gamma);
HSection curved_sections(double z, double r, Gamma gamma);
/// x-extent of the curved region's sections: (z - a_max, z).
Interval curved_x_range(double z, double r, Gamma gamma);

}  // namespace nlbv
