#include "nlbv/functional1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "nlbv/summation.hpp"

namespace nlbv {

namespace {

constexpr double kCantorHolderExponent = 0.63092975357145743710;  // log 2 / log 3

// Relative guard on lambda h^(1+g) against rounding in pow and in the bound sums.
constexpr double kGuard = 64.0 * std::numeric_limits<double>::epsilon();

double threshold(double h, double lambda, double gamma) noexcept
{
    return lambda * std::pow(h, 1.0 + gamma);
}

/// max over [h0, h1] of the concave map A + B h - lambda h^(1+gamma).
double max_concave_gap(const AffineBound& f, double h0, double h1, double lambda, double gamma) noexcept
{
    double h = h0;
    if (f.b > 0.0) {
        const double hs = std::pow(f.b / (lambda * (1.0 + gamma)), 1.0 / gamma);
        h = std::clamp(hs, h0, h1);
    }
    return f.at(h) - threshold(h, lambda, gamma);
}

bool dominates(const AffineBound& f, double h0, double h1, double lambda, double gamma) noexcept
{
    // f - lambda h^(1+g) is concave: nonnegative at h0 and positive at h1 means positive on (h0, h1].
    return f.at(h0) >= threshold(h0, lambda, gamma) && f.at(h1) > threshold(h1, lambda, gamma);
}

/// a + b rounded toward -inf / +inf, using the exact TwoSum error term.
double sum_down(double a, double b) noexcept
{
    const double s = a + b, bb = s - a, err = (a - (s - bb)) + (b - bb);
    return err < 0.0 ? std::nextafter(s, -INFINITY) : s;
}
double sum_up(double a, double b) noexcept
{
    const double s = a + b, bb = s - a, err = (a - (s - bb)) + (b - bb);
    return err > 0.0 ? std::nextafter(s, INFINITY) : s;
}

}  // namespace

void ExceedanceQuery::validate() const
{
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0 (the functionals are studied for gamma > 0)");
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    require(std::isfinite(tol) && tol > 0.0, "tol must be > 0");
    require(max_depth > 0 && max_depth <= 200, "max_depth must lie in [1, 200]");
    require(max_boxes > 0, "max_boxes must be positive");
}

double default_tolerance(const BVFunction1D& u, double gamma)
{
    require(gamma > 0.0, "gamma must be > 0");
    const VariationTriple v = u.variation();
    const double scale =
        2.0 * (v.a / gamma + v.j / (1.0 + gamma) + gamma * v.c / (2.0 * (1.0 + 2.0 * gamma) * (1.0 + gamma)));
    return 1e-4 * std::max(1.0, scale);
}

ExceedanceQuery default_query(const BVFunction1D& u, double gamma, double lambda)
{
    ExceedanceQuery q;
    q.gamma = gamma;
    q.lambda = lambda;
    q.tol = default_tolerance(u, gamma);
    q.validate();
    return q;
}

double truncation_radius(const BVFunction1D& u, const ExceedanceQuery& q)
{
    q.validate();
    const double total = u.variation().total();
    if (total == 0.0) throw ConstantFunctionError();
    return std::pow(total / q.lambda, 1.0 / (1.0 + q.gamma));
}

IncrementBounds increment_bounds(const BVFunction1D& u, const PlaneBox& box)
{
    const double x0 = box.x.lo, x1 = box.x.hi, h0 = box.h.lo, h1 = box.h.hi;
    const Interval X{x0, x1};
    // y-range rounded outward so that evaluations at its ends stay certified.
    const Interval Y{sum_down(x0, h0), sum_up(x1, h1)};
    const Interval S{x0, Y.hi};
    const double hm = 0.5 * (h0 + h1);

    IncrementBounds out;
    for (const auto& piece : u.pieces()) {
        if (const auto* j = std::get_if<JumpPiece>(&piece)) {
            const double s = j->location;
            if (!(x0 < s && s <= S.hi)) continue;
            if (x1 < s && s <= Y.lo) {
                out.lower.a += j->height;
                out.upper.a += j->height;
            } else {
                out.lower.a += std::min(0.0, j->height);
                out.upper.a += std::max(0.0, j->height);
            }
            continue;
        }

        const Interval supp = piece_support(piece);
        if (supp.hi <= S.lo || supp.lo >= S.hi) continue;

        if (const auto* c = std::get_if<CantorPiece>(&piece)) {
            const double fx0 = c->value(x0), fx1 = c->value(x1);
            const double fy0 = c->value(Y.lo), fy1 = c->value(Y.hi);
            const double cg = kGuard * std::abs(c->rise);
            const double holder =
                std::min(1.0, 2.0 * std::pow(h1 / c->support.length(), kCantorHolderExponent)) * std::abs(c->rise) + cg;
            if (c->rise > 0.0) {
                out.lower.a += std::max(0.0, fy0 - fx1 - cg);
                out.upper.a += std::min(fy1 - fx0 + cg, holder);
            } else {
                out.lower.a += std::max(fy1 - fx0 - cg, -holder);
                out.upper.a += std::min(0.0, fy0 - fx1 + cg);
            }
            continue;
        }

        const auto& sp = std::get<SmoothPiece>(piece);
        const Interval vx = sp.value_range(X);
        const Interval vy = sp.value_range(Y);
        const Interval d = sp.slope_range(S);
        // Two valid forms: value ranges (constant in h) or slope range times h.
        // Each carries its own rounding guard: absolute for values, relative
        // to the slope scale for slopes, so thin boxes near h = 0 stay decidable.
        const double vg = kGuard * (sp.exact_tv() + std::max({std::abs(vx.lo), std::abs(vx.hi), std::abs(vy.lo),
                                                               std::abs(vy.hi)}));
        const double dg = kGuard * (sp.lipschitz_bound() + std::max(std::abs(d.lo), std::abs(d.hi)));
        // Centered form: increment at the box center plus gradient range times half-widths.
        const double xc = 0.5 * (x0 + x1), rx = 0.5 * (x1 - x0), rh = 0.5 * (h1 - h0);
        const Interval sy = sp.slope_range(Y), sx = sp.slope_range(X);
        const double gx = std::max(std::abs(sy.lo - sx.hi), std::abs(sy.hi - sx.lo));
        const double gh = std::max(std::abs(sy.lo), std::abs(sy.hi));
        const double spread = (rx * gx + rh * gh) * (1.0 + kGuard) +
                              kGuard * sp.lipschitz_bound() * (std::abs(xc) + std::abs(hm));
        const double mid = sp.value(xc + hm) - sp.value(xc);
        const double const_lo = std::max(vy.lo - vx.hi, mid - spread) - vg;
        const double const_hi = std::min(vy.hi - vx.lo, mid + spread) + vg;
        const double slope_lo = d.lo - dg, slope_hi = d.hi + dg;
        if (const_lo >= slope_lo * hm)
            out.lower.a += const_lo;
        else
            out.lower.b += slope_lo;
        if (const_hi <= slope_hi * hm)
            out.upper.a += const_hi;
        else
            out.upper.b += slope_hi;
    }
    return out;
}

BoxVerdict classify_box(const BVFunction1D& u, const PlaneBox& box, const ExceedanceQuery& q)
{
    const IncrementBounds ib = increment_bounds(u, box);
    const double h0 = box.h.lo, h1 = box.h.hi;
    const double hi_lambda = q.lambda * (1.0 + kGuard), lo_lambda = q.lambda * (1.0 - kGuard);
    const AffineBound neg_upper{-ib.upper.a, -ib.upper.b};
    if (dominates(ib.lower, h0, h1, hi_lambda, q.gamma) || dominates(neg_upper, h0, h1, hi_lambda, q.gamma))
        return BoxVerdict::inside;
    const AffineBound neg_lower{-ib.lower.a, -ib.lower.b};
    if (max_concave_gap(ib.upper, h0, h1, lo_lambda, q.gamma) <= 0.0 &&
        max_concave_gap(neg_lower, h0, h1, lo_lambda, q.gamma) <= 0.0)
        return BoxVerdict::outside;
    return BoxVerdict::mixed;
}

namespace {

struct Node {
    PlaneBox box;
    double mass;
    std::uint64_t id;
    std::uint8_t xdepth;
    std::uint8_t hdepth;
};

struct HeavierFirst {
    bool operator()(const Node& a, const Node& b) const noexcept
    {
        if (a.mass != b.mass) return a.mass < b.mass;
        return a.id > b.id;
    }
};

struct Child {
    PlaneBox box;
    BoxVerdict verdict;
    double mass;
};

class BranchAndBound {
public:
    BranchAndBound(const BVFunction1D& u, const ExceedanceQuery& q, const PlaneBox& root)
        : u_(u), q_(q)
    {
        const Child c = make_child(root);
        admit(c, 0, 0);
    }

    Evaluation run()
    {
        // Leave headroom below tol for the final outward rounding guard.
        const double target = q_.tol * (1.0 - 1e-9) / (2.0 * q_.lambda);
        std::size_t splits = 0;
        while (!heap_.empty()) {
            if (gap_ <= target) {
                gap_ = exact_gap();
                if (gap_ <= target) break;
            }
            if (splits >= q_.max_boxes) break;
            std::pop_heap(heap_.begin(), heap_.end(), HeavierFirst{});
            const Node n = heap_.back();
            heap_.pop_back();
            const bool can_x = n.xdepth < q_.max_depth;
            const bool can_h = n.hdepth < q_.max_depth && h_split_point(n.box).has_value();
            if (!can_x && !can_h) {
                frozen_.push_back(n);
                continue;
            }
            ++splits;
            gap_ -= n.mass;

            std::array<Child, 2> xs{}, hs{};
            double xs_gain = -1.0, hs_gain = -1.0;
            if (can_x) {
                const double xm = n.box.x.midpoint();
                xs = {make_child({{n.box.x.lo, xm}, n.box.h}), make_child({{xm, n.box.x.hi}, n.box.h})};
                xs_gain = decided_mass(xs);
            }
            if (can_h) {
                const double hm = *h_split_point(n.box);
                hs = {make_child({n.box.x, {n.box.h.lo, hm}}), make_child({n.box.x, {hm, n.box.h.hi}})};
                hs_gain = decided_mass(hs);
            }
            bool use_h;
            if (!can_x) use_h = true;
            else if (!can_h) use_h = false;
            else if (xs_gain != hs_gain) use_h = hs_gain > xs_gain;
            else use_h = n.box.h.length() > n.box.x.length();
            const auto& chosen = use_h ? hs : xs;
            for (const Child& c : chosen)
                admit(c, n.xdepth + (use_h ? 0 : 1), n.hdepth + (use_h ? 1 : 0));
        }

        const double lo = inside_.value();
        const double gap = exact_gap();
        Evaluation e;
        // Outward guard against summation rounding.
        const double guard = 8.0 * std::numeric_limits<double>::epsilon() * (lo + gap);
        e.enclosure = {std::max(0.0, lo - guard), lo + gap + guard};
        e.tolerance_met = 2.0 * q_.lambda * e.enclosure.width() <= q_.tol;
        e.splits = splits;
        return e;
    }

private:
    [[nodiscard]] std::optional<double> h_split_point(const PlaneBox& b) const
    {
        const double g = q_.gamma;
        double hm = std::pow(0.5 * (std::pow(b.h.lo, g) + std::pow(b.h.hi, g)), 1.0 / g);
        if (!(hm > b.h.lo && hm < b.h.hi)) hm = b.h.midpoint();
        if (!(hm > b.h.lo && hm < b.h.hi)) return std::nullopt;
        return hm;
    }

    [[nodiscard]] Child make_child(const PlaneBox& b) const
    {
        const double m = b.x.length() * kernel_mass(b.h.lo, b.h.hi, q_.gamma);
        if (m <= 0.0) return {b, BoxVerdict::outside, 0.0};
        return {b, classify_box(u_, b, q_), m};
    }

    static double decided_mass(const std::array<Child, 2>& cs) noexcept
    {
        double s = 0.0;
        for (const Child& c : cs)
            if (c.verdict != BoxVerdict::mixed) s += c.mass;
        return s;
    }

    void admit(const Child& c, int xdepth, int hdepth)
    {
        if (c.verdict == BoxVerdict::inside) {
            inside_.add(c.mass);
        } else if (c.verdict == BoxVerdict::mixed) {
            heap_.push_back({c.box, c.mass, next_id_++, static_cast<std::uint8_t>(xdepth), static_cast<std::uint8_t>(hdepth)});
            std::push_heap(heap_.begin(), heap_.end(), HeavierFirst{});
            gap_ += c.mass;
        }
    }

    [[nodiscard]] double exact_gap() const
    {
        // Heap storage order is a deterministic function of the operation sequence.
        NeumaierSum s;
        for (const Node& n : heap_) s.add(n.mass);
        for (const Node& n : frozen_) s.add(n.mass);
        return s.value();
    }

    const BVFunction1D& u_;
    const ExceedanceQuery& q_;
    std::vector<Node> heap_;
    std::vector<Node> frozen_;
    NeumaierSum inside_;
    double gap_ = 0.0;
    std::uint64_t next_id_ = 0;
};

}  // namespace

Evaluation measure_exceedance(const BVFunction1D& u, const ExceedanceQuery& q)
{
    q.validate();
    if (u.is_constant()) return {{0.0, 0.0}, true, 0};
    const double R = truncation_radius(u, q);
    const Interval supp = u.derivative_support();
    const PlaneBox root = make_plane_box({supp.lo - R, supp.hi}, {0.0, R});
    BranchAndBound bb(u, q, root);
    return bb.run();
}

Evaluation F_value(const BVFunction1D& u, const ExceedanceQuery& q)
{
    Evaluation e = measure_exceedance(u, q);
    e.enclosure = scaled(e.enclosure, 2.0 * q.lambda);
    return e;
}

double closed_form_jump_F(double J, double gamma)
{
    require(std::isfinite(J) && J > 0.0, "closed_form_jump_F: J must be > 0");
    require(std::isfinite(gamma) && gamma > 0.0, "closed_form_jump_F: gamma must be > 0");
    return 2.0 * J / (1.0 + gamma);
}

}  // namespace nlbv
