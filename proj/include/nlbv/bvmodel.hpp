#pragma once

// One-dimensional BV functions built from a closed catalog of pieces:
// smooth profiles (absolutely continuous part), jumps, and Cantor staircases.
// Every piece knows its exact value range and slope range on any interval,
// which is what the exceedance branch-and-bound needs to certify boxes.

#include <span>
#include <variant>
#include <vector>

#include "nlbv/types.hpp"

namespace nlbv {

/// Standard Cantor staircase on [0,1], evaluated exactly from the ternary
/// expansion of the double `t` to 64 ternary digits.
double cantor_eval(double t);

enum class ProfileFamily { polynomial, affine_ramp, smoothstep, sine_ramp };

const char* to_string(ProfileFamily f) noexcept;
ProfileFamily profile_family_from_string(const std::string& name);

/// A catalog profile supported on [a,b]:
///   t -> P(s) - P(0),  s = clamp((t - a) / (b - a), 0, 1)
/// so it is 0 left of the support and constant P(1) - P(0) right of it.
/// Polynomial coefficients are given in the normalised coordinate s.
class CatalogProfile {
public:
    static CatalogProfile polynomial(Interval support, std::vector<double> coefficients);
    static CatalogProfile affine_ramp(Interval support, double rise);
    static CatalogProfile smoothstep(Interval support, double rise);
    static CatalogProfile sine_ramp(Interval support, double rise);

    [[nodiscard]] ProfileFamily family() const noexcept { return family_; }
    [[nodiscard]] Interval support() const noexcept { return support_; }
    /// Increase across the support, P(1) - P(0).
    [[nodiscard]] double rise() const noexcept;
    /// Ramp amplitude (non-polynomial families) or the s-coefficients.
    [[nodiscard]] double amplitude() const noexcept { return amplitude_; }
    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] double value(double t) const noexcept;
    [[nodiscard]] double slope(double t) const noexcept;
    [[nodiscard]] Interval value_range(Interval I) const noexcept;
    [[nodiscard]] Interval slope_range(Interval I) const noexcept;
    [[nodiscard]] double total_variation() const noexcept { return tv_; }
    [[nodiscard]] double total_variation(Interval I) const noexcept;
    [[nodiscard]] double lipschitz_bound() const noexcept { return lipschitz_; }
    [[nodiscard]] bool is_constant() const noexcept { return tv_ == 0.0; }

    [[nodiscard]] CatalogProfile translated(double d) const;
    [[nodiscard]] CatalogProfile dilated(double s) const;
    [[nodiscard]] CatalogProfile scaled(double c) const;

private:
    CatalogProfile(ProfileFamily family, Interval support, double amplitude, std::vector<double> coeffs);
    void analyse();
    [[nodiscard]] double shape(double s) const noexcept;
    [[nodiscard]] double shape_d1(double s) const noexcept;
    [[nodiscard]] double to_s(double t) const noexcept;

    ProfileFamily family_;
    Interval support_;
    double amplitude_ = 0.0;
    std::vector<double> coeffs_;
    std::vector<double> coeffs_d1_;
    std::vector<double> crit_;     // interior roots of P' in (0,1)
    std::vector<double> inflect_;  // interior roots of P'' in (0,1)
    double tv_ = 0.0;
    double lipschitz_ = 0.0;
};

/// Section of a radial profile g along a line at distance `offset` from the
/// centre: t -> g(sqrt(offset^2 + (t - foot)^2)) - g(+inf).
class RadialSectionProfile {
public:
    RadialSectionProfile(CatalogProfile radial, double offset, double foot);

    [[nodiscard]] const CatalogProfile& radial() const noexcept { return radial_; }
    [[nodiscard]] double offset() const noexcept { return offset_; }
    [[nodiscard]] double foot() const noexcept { return foot_; }
    [[nodiscard]] Interval support() const noexcept { return support_; }

    [[nodiscard]] double value(double t) const noexcept;
    [[nodiscard]] double slope(double t) const noexcept;
    [[nodiscard]] Interval value_range(Interval I) const noexcept;
    [[nodiscard]] Interval slope_range(Interval I) const noexcept;
    [[nodiscard]] double total_variation() const noexcept { return tv_; }
    [[nodiscard]] double lipschitz_bound() const noexcept { return lipschitz_; }

    [[nodiscard]] RadialSectionProfile translated(double d) const;
    [[nodiscard]] RadialSectionProfile dilated(double s) const;
    [[nodiscard]] RadialSectionProfile scaled(double c) const;

private:
    [[nodiscard]] double rho(double t) const noexcept;
    [[nodiscard]] Interval rho_range(Interval I) const noexcept;

    CatalogProfile radial_;
    double offset_;
    double foot_;
    double end_value_;
    Interval support_;
    double tv_ = 0.0;
    double lipschitz_ = 0.0;
};

/// Absolutely continuous component.
class SmoothPiece {
public:
    using Profile = std::variant<CatalogProfile, RadialSectionProfile>;

    explicit SmoothPiece(Profile profile) : profile_(std::move(profile)) {}

    [[nodiscard]] const Profile& profile() const noexcept { return profile_; }
    [[nodiscard]] Interval support() const noexcept;
    [[nodiscard]] double value(double t) const noexcept;
    [[nodiscard]] double slope(double t) const noexcept;
    [[nodiscard]] Interval value_range(Interval I) const noexcept;
    [[nodiscard]] Interval slope_range(Interval I) const noexcept;
    [[nodiscard]] double lipschitz_bound() const noexcept;
    [[nodiscard]] double exact_tv() const noexcept;

    [[nodiscard]] SmoothPiece translated(double d) const;
    [[nodiscard]] SmoothPiece dilated(double s) const;
    [[nodiscard]] SmoothPiece scaled(double c) const;

private:
    Profile profile_;
};

/// Jump of `height` at `location`; right-continuous, so u jumps for t >= location.
struct JumpPiece {
    double location = 0.0;
    double height = 0.0;

    [[nodiscard]] double value(double t) const noexcept { return t >= location ? height : 0.0; }
    [[nodiscard]] double left_value(double t) const noexcept { return t > location ? height : 0.0; }
};

/// Cantor staircase of total increase `rise` (signed) across `support`.
struct CantorPiece {
    Interval support;
    double rise = 0.0;

    [[nodiscard]] int orientation() const noexcept { return rise > 0.0 ? 1 : -1; }
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] Interval value_range(Interval I) const;
};

using Piece = std::variant<SmoothPiece, JumpPiece, CantorPiece>;

struct OscillationBound {
    bool lower_exact = false;
    double osc = 0.0;
};

/// u = base_value + sum of piece contributions; Du is compactly supported.
class BVFunction1D {
public:
    BVFunction1D() = default;
    explicit BVFunction1D(std::vector<Piece> pieces, double base_value = 0.0);

    [[nodiscard]] double base_value() const noexcept { return base_; }
    [[nodiscard]] std::span<const Piece> pieces() const noexcept { return pieces_; }

    /// Right-continuous representative u(x+).
    [[nodiscard]] double eval(double x) const;
    [[nodiscard]] double operator()(double x) const { return eval(x); }
    /// Left limit u(x-).
    [[nodiscard]] double left_limit(double x) const;

    [[nodiscard]] bool is_constant() const noexcept { return pieces_.empty(); }
    /// Convex hull of the supports of all pieces (empty for constant u).
    [[nodiscard]] Interval derivative_support() const noexcept;
    [[nodiscard]] VariationTriple variation() const noexcept;

    [[nodiscard]] BVFunction1D translated(double d) const;
    /// x -> u(x / s), s > 0.
    [[nodiscard]] BVFunction1D dilated(double s) const;
    /// x -> c * u(x).
    [[nodiscard]] BVFunction1D scaled(double c) const;

private:
    std::vector<Piece> pieces_;
    double base_ = 0.0;
};

inline double eval(const BVFunction1D& u, double x) { return u.eval(x); }
VariationTriple variation_decomposition(const BVFunction1D& u) noexcept;
OscillationBound oscillation_bound(const BVFunction1D& u, Interval I);

/// Support of a single piece (a degenerate interval for jumps).
Interval piece_support(const Piece& p) noexcept;

/// Real roots of the polynomial sum c[k] s^k inside the open interval (a, b),
/// sorted ascending. Roots where the sign does not change may be omitted.
std::vector<double> polynomial_roots(std::span<const double> c, double a, double b);

}  // namespace nlbv
