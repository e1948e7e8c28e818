#include "nlbv/bvmodel.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <numbers>

namespace nlbv {

namespace {

constexpr int kCantorDigits = 64;

template <class UInt>
double cantor_scan(UInt num, unsigned shift)
{
    const UInt mask = (UInt(1) << shift) - 1;
    double result = 0.0;
    double bit = 0.5;
    for (int k = 0; k < kCantorDigits; ++k) {
        num *= 3;
        const auto digit = static_cast<unsigned>(num >> shift);
        num &= mask;
        if (digit == 1) return result + bit;
        if (digit == 2) result += bit;
        bit *= 0.5;
        if (num == 0) break;
    }
    return result;
}

double horner(std::span<const double> c, double s) noexcept
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
    return v;
}

std::vector<double> derivative(std::span<const double> c)
{
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

double bisect_root(std::span<const double> c, double lo, double hi)
{
    double flo = horner(c, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = horner(c, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double cantor_eval(double t)
{
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("cantor_eval: t must lie in [0, 1]");
    if (t == 0.0 || t == 1.0) return t;

    int exponent = 0;
    const double mantissa = std::frexp(t, &exponent);
    auto num = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
    int shift = 53 - exponent;  // t == num / 2^shift exactly
    while ((num & 1U) == 0U && shift > 0) {
        num >>= 1;
        --shift;
    }
    if (shift <= 126) return cantor_scan<unsigned __int128>(num, static_cast<unsigned>(shift));
    return cantor_scan<boost::multiprecision::cpp_int>(num, static_cast<unsigned>(shift));
}

std::vector<double> polynomial_roots(std::span<const double> c, double a, double b)
{
    std::size_t n = c.size();
    while (n > 0 && c[n - 1] == 0.0) --n;
    if (n <= 1) return {};
    const auto p = c.first(n);
    if (n == 2) {
        const double r = -p[0] / p[1];
        if (a < r && r < b) return {r};
        return {};
    }

    const auto dp = derivative(p);
    std::vector<double> pts{a};
    for (double r : polynomial_roots(dp, a, b)) pts.push_back(r);
    pts.push_back(b);

    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double l = pts[i], r = pts[i + 1];
        const double fl = horner(p, l), fr = horner(p, r);
        if (fl == 0.0 && l > a && (roots.empty() || roots.back() != l)) roots.push_back(l);
        if ((fl < 0.0 && fr > 0.0) || (fl > 0.0 && fr < 0.0)) roots.push_back(bisect_root(p, l, r));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// ---------------------------------------------------------------------------
// CatalogProfile

const char* to_string(ProfileFamily f) noexcept
{
    switch (f) {
    case ProfileFamily::polynomial: return "polynomial";
    case ProfileFamily::affine_ramp: return "affine_ramp";
    case ProfileFamily::smoothstep: return "smoothstep";
    case ProfileFamily::sine_ramp: return "sine_ramp";
    }
    return "?";
}

ProfileFamily profile_family_from_string(const std::string& name)
{
    if (name == "polynomial") return ProfileFamily::polynomial;
    if (name == "affine_ramp") return ProfileFamily::affine_ramp;
    if (name == "smoothstep") return ProfileFamily::smoothstep;
    if (name == "sine_ramp") return ProfileFamily::sine_ramp;
    throw std::invalid_argument("unknown profile family '" + name +
                                "' (expected polynomial, affine_ramp, smoothstep or sine_ramp)");
}

CatalogProfile::CatalogProfile(ProfileFamily family, Interval support, double amplitude,
                               std::vector<double> coeffs)
    : family_(family), support_(support), amplitude_(amplitude), coeffs_(std::move(coeffs))
{
    require_finite(support.lo, "support.lo");
    require_finite(support.hi, "support.hi");
    require(support.lo < support.hi, "smooth piece support must satisfy lo < hi");
    require_finite(amplitude, "rise");
    for (double c : coeffs_) require_finite(c, "polynomial coefficient");
    analyse();
}

CatalogProfile CatalogProfile::polynomial(Interval support, std::vector<double> coefficients)
{
    require(!coefficients.empty(), "polynomial profile needs at least one coefficient");
    return CatalogProfile(ProfileFamily::polynomial, support, 0.0, std::move(coefficients));
}

CatalogProfile CatalogProfile::affine_ramp(Interval support, double rise)
{
    return CatalogProfile(ProfileFamily::affine_ramp, support, rise, {});
}

CatalogProfile CatalogProfile::smoothstep(Interval support, double rise)
{
    return CatalogProfile(ProfileFamily::smoothstep, support, rise, {});
}

CatalogProfile CatalogProfile::sine_ramp(Interval support, double rise)
{
    return CatalogProfile(ProfileFamily::sine_ramp, support, rise, {});
}

void CatalogProfile::analyse()
{
    crit_.clear();
    inflect_.clear();
    switch (family_) {
    case ProfileFamily::polynomial: {
        coeffs_d1_ = derivative(coeffs_);
        crit_ = polynomial_roots(coeffs_d1_, 0.0, 1.0);
        inflect_ = polynomial_roots(derivative(coeffs_d1_), 0.0, 1.0);
        break;
    }
    case ProfileFamily::affine_ramp: break;
    case ProfileFamily::smoothstep:
    case ProfileFamily::sine_ramp: inflect_ = {0.5}; break;
    }
    tv_ = total_variation(support_);

    double m = std::max(std::abs(shape_d1(0.0)), std::abs(shape_d1(1.0)));
    for (double c : inflect_) m = std::max(m, std::abs(shape_d1(c)));
    lipschitz_ = m / support_.length();
}

double CatalogProfile::shape(double s) const noexcept
{
    switch (family_) {
    case ProfileFamily::polynomial: return horner(coeffs_, s);
    case ProfileFamily::affine_ramp: return amplitude_ * s;
    case ProfileFamily::smoothstep: return amplitude_ * s * s * (3.0 - 2.0 * s);
    case ProfileFamily::sine_ramp: return amplitude_ * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
    }
    return 0.0;
}

double CatalogProfile::shape_d1(double s) const noexcept
{
    switch (family_) {
    case ProfileFamily::polynomial: return horner(coeffs_d1_, s);
    case ProfileFamily::affine_ramp: return amplitude_;
    case ProfileFamily::smoothstep: return amplitude_ * 6.0 * s * (1.0 - s);
    case ProfileFamily::sine_ramp: return amplitude_ * 0.5 * std::numbers::pi * std::sin(std::numbers::pi * s);
    }
    return 0.0;
}

double CatalogProfile::to_s(double t) const noexcept
{
    if (t <= support_.lo) return 0.0;
    if (t >= support_.hi) return 1.0;
    return std::clamp((t - support_.lo) / support_.length(), 0.0, 1.0);
}

double CatalogProfile::rise() const noexcept { return shape(1.0) - shape(0.0); }

double CatalogProfile::value(double t) const noexcept { return shape(to_s(t)) - shape(0.0); }

double CatalogProfile::slope(double t) const noexcept
{
    if (t < support_.lo || t > support_.hi) return 0.0;
    return shape_d1(to_s(t)) / support_.length();
}

Interval CatalogProfile::value_range(Interval I) const noexcept
{
    const double s0 = to_s(I.lo), s1 = to_s(I.hi);
    double lo = std::min(shape(s0), shape(s1));
    double hi = std::max(shape(s0), shape(s1));
    for (double c : crit_) {
        if (c > s0 && c < s1) {
            const double v = shape(c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    const double p0 = shape(0.0);
    return {lo - p0, hi - p0};
}

Interval CatalogProfile::slope_range(Interval I) const noexcept
{
    Interval r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    auto add = [&r](double v) {
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    };
    if (I.lo < support_.lo || I.hi > support_.hi) add(0.0);
    const double lo = std::max(I.lo, support_.lo), hi = std::min(I.hi, support_.hi);
    if (lo <= hi) {
        const double w = support_.length();
        const double s0 = to_s(lo), s1 = to_s(hi);
        add(shape_d1(s0) / w);
        add(shape_d1(s1) / w);
        for (double c : inflect_)
            if (c > s0 && c < s1) add(shape_d1(c) / w);
    }
    return r;
}

double CatalogProfile::total_variation(Interval I) const noexcept
{
    const double s0 = to_s(I.lo), s1 = to_s(I.hi);
    double prev = shape(s0);
    double tv = 0.0;
    for (double c : crit_) {
        if (c > s0 && c < s1) {
            const double v = shape(c);
            tv += std::abs(v - prev);
            prev = v;
        }
    }
    return tv + std::abs(shape(s1) - prev);
}

CatalogProfile CatalogProfile::translated(double d) const
{
    return CatalogProfile(family_, {support_.lo + d, support_.hi + d}, amplitude_, coeffs_);
}

CatalogProfile CatalogProfile::dilated(double s) const
{
    require(s > 0.0, "dilation factor must be positive");
    return CatalogProfile(family_, {support_.lo * s, support_.hi * s}, amplitude_, coeffs_);
}

CatalogProfile CatalogProfile::scaled(double c) const
{
    auto coeffs = coeffs_;
    for (double& k : coeffs) k *= c;
    return CatalogProfile(family_, support_, amplitude_ * c, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// RadialSectionProfile

RadialSectionProfile::RadialSectionProfile(CatalogProfile radial, double offset, double foot)
    : radial_(std::move(radial)), offset_(offset), foot_(foot)
{
    require(radial_.support().lo >= 0.0, "radial profile support must lie in [0, inf)");
    require(offset_ >= 0.0 && std::isfinite(offset_), "radial section offset must be >= 0");
    require_finite(foot_, "radial section foot");
    end_value_ = radial_.value(radial_.support().hi);
    const double r1 = radial_.support().hi;
    if (offset_ < r1) {
        const double hw = std::sqrt((r1 - offset_) * (r1 + offset_));
        support_ = {foot_ - hw, foot_ + hw};
        tv_ = 2.0 * radial_.total_variation({offset_, r1});
        const Interval g = radial_.slope_range({offset_, r1});
        lipschitz_ = std::max(std::abs(g.lo), std::abs(g.hi));
    } else {
        support_ = {foot_, foot_};
    }
}

double RadialSectionProfile::rho(double t) const noexcept { return std::hypot(offset_, t - foot_); }

Interval RadialSectionProfile::rho_range(Interval I) const noexcept
{
    const double a = rho(I.lo), b = rho(I.hi);
    const double lo = (I.lo <= foot_ && foot_ <= I.hi) ? offset_ : std::min(a, b);
    return {lo, std::max(a, b)};
}

double RadialSectionProfile::value(double t) const noexcept { return radial_.value(rho(t)) - end_value_; }

double RadialSectionProfile::slope(double t) const noexcept
{
    const double r = rho(t);
    if (r == 0.0) return 0.0;
    return radial_.slope(r) * (t - foot_) / r;
}

Interval RadialSectionProfile::value_range(Interval I) const noexcept
{
    const Interval v = radial_.value_range(rho_range(I));
    return {v.lo - end_value_, v.hi - end_value_};
}

Interval RadialSectionProfile::slope_range(Interval I) const noexcept
{
    const Interval g = radial_.slope_range(rho_range(I));
    // (t - foot) / rho(t) is nondecreasing in t and lies in [-1, 1].
    auto q = [this](double t, double fallback) {
        const double r = rho(t);
        return r == 0.0 ? fallback : (t - foot_) / r;
    };
    return g * Interval{q(I.lo, -1.0), q(I.hi, 1.0)};
}

RadialSectionProfile RadialSectionProfile::translated(double d) const
{
    return {radial_, offset_, foot_ + d};
}

RadialSectionProfile RadialSectionProfile::dilated(double s) const
{
    return {radial_.dilated(s), offset_ * s, foot_ * s};
}

RadialSectionProfile RadialSectionProfile::scaled(double c) const
{
    return {radial_.scaled(c), offset_, foot_};
}

// ---------------------------------------------------------------------------
// SmoothPiece

Interval SmoothPiece::support() const noexcept
{
    return std::visit([](const auto& p) { return p.support(); }, profile_);
}

double SmoothPiece::value(double t) const noexcept
{
    return std::visit([t](const auto& p) { return p.value(t); }, profile_);
}

double SmoothPiece::slope(double t) const noexcept
{
    return std::visit([t](const auto& p) { return p.slope(t); }, profile_);
}

Interval SmoothPiece::value_range(Interval I) const noexcept
{
    return std::visit([I](const auto& p) { return p.value_range(I); }, profile_);
}

Interval SmoothPiece::slope_range(Interval I) const noexcept
{
    return std::visit([I](const auto& p) { return p.slope_range(I); }, profile_);
}

double SmoothPiece::lipschitz_bound() const noexcept
{
    return std::visit([](const auto& p) { return p.lipschitz_bound(); }, profile_);
}

double SmoothPiece::exact_tv() const noexcept
{
    return std::visit([](const auto& p) { return p.total_variation(); }, profile_);
}

SmoothPiece SmoothPiece::translated(double d) const
{
    return SmoothPiece(std::visit([d](const auto& p) -> Profile { return p.translated(d); }, profile_));
}

SmoothPiece SmoothPiece::dilated(double s) const
{
    return SmoothPiece(std::visit([s](const auto& p) -> Profile { return p.dilated(s); }, profile_));
}

SmoothPiece SmoothPiece::scaled(double c) const
{
    return SmoothPiece(std::visit([c](const auto& p) -> Profile { return p.scaled(c); }, profile_));
}

// ---------------------------------------------------------------------------
// CantorPiece

double CantorPiece::value(double t) const
{
    if (t <= support.lo) return 0.0;
    if (t >= support.hi) return rise;
    return rise * cantor_eval(std::clamp((t - support.lo) / support.length(), 0.0, 1.0));
}

Interval CantorPiece::value_range(Interval I) const
{
    const double a = value(I.lo), b = value(I.hi);
    return {std::min(a, b), std::max(a, b)};
}

// ---------------------------------------------------------------------------
// BVFunction1D

Interval piece_support(const Piece& p) noexcept
{
    struct {
        Interval operator()(const SmoothPiece& s) const noexcept { return s.support(); }
        Interval operator()(const JumpPiece& j) const noexcept { return {j.location, j.location}; }
        Interval operator()(const CantorPiece& c) const noexcept { return c.support; }
    } visitor;
    return std::visit(visitor, p);
}

BVFunction1D::BVFunction1D(std::vector<Piece> pieces, double base_value) : base_(base_value)
{
    require_finite(base_value, "base_value");
    std::map<double, double> jumps;  // merged by location
    std::vector<double> jump_order;
    for (auto& piece : pieces) {
        if (auto* j = std::get_if<JumpPiece>(&piece)) {
            require_finite(j->location, "jump location");
            require_finite(j->height, "jump height");
            if (!jumps.contains(j->location)) jump_order.push_back(j->location);
            jumps[j->location] += j->height;
        } else if (auto* c = std::get_if<CantorPiece>(&piece)) {
            require_finite(c->support.lo, "cantor support.lo");
            require_finite(c->support.hi, "cantor support.hi");
            require(c->support.lo < c->support.hi, "cantor support must satisfy lo < hi");
            require_finite(c->rise, "cantor rise");
            if (c->rise != 0.0) pieces_.push_back(*c);
        } else {
            const auto& s = std::get<SmoothPiece>(piece);
            if (s.exact_tv() > 0.0) pieces_.push_back(s);
        }
    }
    for (double loc : jump_order) {
        const double h = jumps[loc];
        if (h != 0.0) pieces_.push_back(JumpPiece{loc, h});
    }
}

double BVFunction1D::eval(double x) const
{
    double v = base_;
    for (const auto& p : pieces_) v += std::visit([x](const auto& q) { return q.value(x); }, p);
    return v;
}

double BVFunction1D::left_limit(double x) const
{
    double v = base_;
    for (const auto& p : pieces_) {
        if (const auto* j = std::get_if<JumpPiece>(&p))
            v += j->left_value(x);
        else
            v += std::visit([x](const auto& q) { return q.value(x); }, p);
    }
    return v;
}

Interval BVFunction1D::derivative_support() const noexcept
{
    Interval s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : pieces_) s = hull(s, piece_support(p));
    return s;
}

VariationTriple BVFunction1D::variation() const noexcept
{
    VariationTriple v;
    for (const auto& p : pieces_) {
        if (const auto* s = std::get_if<SmoothPiece>(&p))
            v.a += s->exact_tv();
        else if (const auto* j = std::get_if<JumpPiece>(&p))
            v.j += std::abs(j->height);
        else
            v.c += std::abs(std::get<CantorPiece>(p).rise);
    }
    return v;
}

BVFunction1D BVFunction1D::translated(double d) const
{
    require_finite(d, "translation");
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        if (const auto* s = std::get_if<SmoothPiece>(&p))
            out.emplace_back(s->translated(d));
        else if (const auto* j = std::get_if<JumpPiece>(&p))
            out.emplace_back(JumpPiece{j->location + d, j->height});
        else {
            const auto& c = std::get<CantorPiece>(p);
            out.emplace_back(CantorPiece{{c.support.lo + d, c.support.hi + d}, c.rise});
        }
    }
    return BVFunction1D(std::move(out), base_);
}

BVFunction1D BVFunction1D::dilated(double s) const
{
    require(s > 0.0 && std::isfinite(s), "dilation factor must be positive");
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        if (const auto* sp = std::get_if<SmoothPiece>(&p))
            out.emplace_back(sp->dilated(s));
        else if (const auto* j = std::get_if<JumpPiece>(&p))
            out.emplace_back(JumpPiece{j->location * s, j->height});
        else {
            const auto& c = std::get<CantorPiece>(p);
            out.emplace_back(CantorPiece{{c.support.lo * s, c.support.hi * s}, c.rise});
        }
    }
    return BVFunction1D(std::move(out), base_);
}

BVFunction1D BVFunction1D::scaled(double c) const
{
    require_finite(c, "scale factor");
    if (c == 0.0) return BVFunction1D({}, 0.0);
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        if (const auto* s = std::get_if<SmoothPiece>(&p))
            out.emplace_back(s->scaled(c));
        else if (const auto* j = std::get_if<JumpPiece>(&p))
            out.emplace_back(JumpPiece{j->location, j->height * c});
        else {
            const auto& k = std::get<CantorPiece>(p);
            out.emplace_back(CantorPiece{k.support, k.rise * c});
        }
    }
    return BVFunction1D(std::move(out), base_ * c);
}

VariationTriple variation_decomposition(const BVFunction1D& u) noexcept { return u.variation(); }

OscillationBound oscillation_bound(const BVFunction1D& u, Interval I)
{
    require(std::isfinite(I.lo) && std::isfinite(I.hi) && I.lo <= I.hi, "oscillation_bound: I must be bounded");
    OscillationBound out;
    int contributing = 0;
    int direction = 0;
    bool same_direction = true;
    auto note = [&](double osc, int dir) {
        if (osc <= 0.0) return;
        out.osc += osc;
        ++contributing;
        if (dir == 0 || (direction != 0 && dir != direction)) same_direction = false;
        if (direction == 0) direction = dir;
    };
    for (const auto& p : u.pieces()) {
        if (const auto* s = std::get_if<SmoothPiece>(&p)) {
            const Interval v = s->value_range(I);
            const Interval d = s->slope_range(I);
            note(v.hi - v.lo, d.lo >= 0.0 ? 1 : (d.hi <= 0.0 ? -1 : 0));
        } else if (const auto* j = std::get_if<JumpPiece>(&p)) {
            if (I.lo < j->location && j->location <= I.hi) note(std::abs(j->height), j->height > 0 ? 1 : -1);
        } else {
            const auto& c = std::get<CantorPiece>(p);
            note(std::abs(c.value(I.hi) - c.value(I.lo)), c.orientation());
        }
    }
    out.lower_exact = contributing <= 1 || same_direction;
    return out;
}

}  // namespace nlbv
