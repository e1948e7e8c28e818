#include "nlbv/numeasure.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nlbv/summation.hpp"

namespace nlbv {

PlaneBox make_plane_box(Interval x, Interval h)
{
    require(std::isfinite(x.lo) && std::isfinite(x.hi) && x.lo <= x.hi, "PlaneBox: malformed x interval");
    require(std::isfinite(h.lo) && std::isfinite(h.hi) && h.lo <= h.hi, "PlaneBox: malformed h interval");
    require(h.lo >= 0.0, "PlaneBox: h interval must satisfy h_lo >= 0");
    return {x, h};
}

const char* to_string(BoxVerdict v) noexcept
{
    switch (v) {
    case BoxVerdict::inside: return "inside";
    case BoxVerdict::outside: return "outside";
    case BoxVerdict::mixed: return "mixed";
    }
    return "?";
}

double kernel_mass(double h0, double h1, double gamma) noexcept
{
    if (h1 <= h0) return 0.0;
    if (h0 <= 0.0) return std::pow(h1, gamma) / gamma;
    if (gamma == 1.0) return h1 - h0;
    if (gamma == 2.0) return 0.5 * (h1 - h0) * (h1 + h0);
    if (h0 < 0.5 * h1) return (std::pow(h1, gamma) - std::pow(h0, gamma)) / gamma;
    return std::pow(h0, gamma) * std::expm1(gamma * std::log1p((h1 - h0) / h0)) / gamma;
}

double nu_triangle(double delta, Gamma gamma)
{
    require(std::isfinite(delta) && delta > 0.0, "nu_triangle: delta must be > 0");
    const double g = gamma.value();
    return std::pow(delta, 1.0 + g) / (1.0 + g);
}

double nu_curved(double r, Gamma gamma)
{
    require(std::isfinite(r) && r > 0.0, "nu_curved: r must be > 0");
    const double g = gamma.value();
    return g * std::pow(r, 1.0 + g) / ((1.0 + 2.0 * g) * (1.0 + g));
}

double nu_slab(const PlaneBox& box, Gamma gamma)
{
    const PlaneBox b = make_plane_box(box.x, box.h);
    return b.x.length() * kernel_mass(b.h.lo, b.h.hi, gamma.value());
}

namespace {

struct OracleState {
    const CellClassifier& region;
    double gamma;
    int max_level;
    NeumaierSum lo;
    NeumaierSum hi;

    void visit(const PlaneBox& cell, int level)
    {
        const BoxVerdict v = region(cell);
        if (v == BoxVerdict::outside) return;
        const double m = cell.x.length() * kernel_mass(cell.h.lo, cell.h.hi, gamma);
        if (v == BoxVerdict::inside) {
            lo.add(m);
            hi.add(m);
            return;
        }
        if (level == max_level) {
            hi.add(m);
            return;
        }
        const double xm = cell.x.midpoint(), hm = cell.h.midpoint();
        visit({{cell.x.lo, xm}, {cell.h.lo, hm}}, level + 1);
        visit({{xm, cell.x.hi}, {cell.h.lo, hm}}, level + 1);
        visit({{cell.x.lo, xm}, {hm, cell.h.hi}}, level + 1);
        visit({{xm, cell.x.hi}, {hm, cell.h.hi}}, level + 1);
    }
};

}  // namespace

Enclosure nu_quadrature_oracle(const CellClassifier& region, const PlaneBox& bounding, Gamma gamma, int n)
{
    require(n >= 2, "nu_quadrature_oracle: n must be >= 2");
    const PlaneBox root = make_plane_box(bounding.x, bounding.h);
    int levels = 0;
    while ((1 << levels) < n) ++levels;
    OracleState state{region, gamma.value(), levels, {}, {}};
    state.visit(root, 0);
    return {state.lo.value(), state.hi.value()};
}

QuadratureValue nu_section_integral(const HSection& section, Interval x_range, Gamma gamma)
{
    require(x_range.lo < x_range.hi, "nu_section_integral: empty x range");
    const double g = gamma.value();
    auto f = [&](double x) {
        const Interval h = section(x);
        return h.hi > h.lo ? kernel_mass(std::max(h.lo, 0.0), h.hi, g) : 0.0;
    };
    boost::math::quadrature::tanh_sinh<double> integrator(15);
    double error = 0.0, l1 = 0.0;
    const double v = integrator.integrate(f, x_range.lo, x_range.hi, 1e-14, &error, &l1);
    return {v, error};
}

// ---------------------------------------------------------------------------

CellClassifier triangle_region(double s, double delta)
{
    return [s, delta](const PlaneBox& c) {
        const double x0 = c.x.lo, x1 = c.x.hi, h0 = c.h.lo, h1 = c.h.hi;
        if (x0 >= s || x1 <= s - delta || h0 >= delta || x1 + h1 <= s) return BoxVerdict::outside;
        if (x1 <= s && x0 >= s - delta && h1 <= delta && x0 + h0 >= s) return BoxVerdict::inside;
        return BoxVerdict::mixed;
    };
}

HSection triangle_sections(double s, double delta)
{
    return [s, delta](double x) -> Interval {
        if (x <= s - delta || x >= s) return {0.0, 0.0};
        return {s - x, delta};
    };
}

namespace {

struct CurvedGeometry {
    double z, r, p, k;  // phi(w) = w - k w^p, p = 1/(1+g), k = r^(g/(1+g))

    CurvedGeometry(double z_, double r_, double g)
        : z(z_), r(r_), p(1.0 / (1.0 + g)), k(std::pow(r_, g / (1.0 + g)))
    {
        require(std::isfinite(r_) && r_ > 0.0, "curved region: r must be > 0");
    }
    [[nodiscard]] double phi(double w) const { return w - k * std::pow(w, p); }
    /// argmin of phi on [0, inf).
    [[nodiscard]] double w_star() const { return std::pow(k * p, 1.0 / (1.0 - p)); }
};

}  // namespace

CellClassifier curved_region(double z, double r, Gamma gamma)
{
    const CurvedGeometry geo(z, r, gamma.value());
    return [geo](const PlaneBox& c) {
        const double x0 = c.x.lo, x1 = c.x.hi;
        const double wl = c.x.lo + c.h.lo - geo.z, wh = c.x.hi + c.h.hi - geo.z;
        if (x0 >= geo.z || x1 <= geo.z - geo.r || wh <= 0.0 || wl >= geo.r) return BoxVerdict::outside;

        // phi is convex on [0, inf), so its max over [wl', wh'] sits at an endpoint.
        const double a = std::max(wl, 0.0), b = std::min(wh, geo.r);
        const double wmin = std::clamp(geo.w_star(), a, b);
        const double phi_min = geo.phi(wmin);
        if (phi_min >= x1 - geo.z) return BoxVerdict::outside;

        const bool linear_ok = x1 <= geo.z && x0 >= geo.z - geo.r && wl >= 0.0 && wh <= geo.r;
        if (linear_ok && std::max(geo.phi(wl), geo.phi(wh)) <= x0 - geo.z) return BoxVerdict::inside;
        return BoxVerdict::mixed;
    };
}

Interval curved_x_range(double z, double r, Gamma gamma)
{
    const CurvedGeometry geo(z, r, gamma.value());
    return {z + geo.phi(geo.w_star()), z};
}

HSection curved_sections(double z, double r, Gamma gamma)
{
    const CurvedGeometry geo(z, r, gamma.value());
    return [geo](double x) -> Interval {
        const double a = geo.z - x;
        if (a <= 0.0 || a >= geo.r) return {0.0, 0.0};
        const double ws = geo.w_star();
        if (geo.phi(ws) >= -a) return {0.0, 0.0};
        // phi decreases on [0, ws] and increases on [ws, r]; phi(0) = phi(r) = 0.
        auto solve = [&](double lo, double hi, bool decreasing) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const bool below = geo.phi(mid) < -a;
                if (below == decreasing) hi = mid;
                else lo = mid;
            }
            return 0.5 * (lo + hi);
        };
        const double w1 = solve(0.0, ws, true);
        const double w2 = solve(ws, geo.r, false);
        return {w1 + a, w2 + a};
    };
}

}  // namespace nlbv
