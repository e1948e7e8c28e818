#include "doctest.h"

#include <random>

#include "catalog.hpp"
#include "nlbv/functional1d.hpp"
#include "oracles.hpp"

using namespace nlbv;

namespace {

ExceedanceQuery query(double gamma, double lambda, double tol, std::size_t max_boxes = 4'000'000)
{
    ExceedanceQuery q;
    q.gamma = gamma;
    q.lambda = lambda;
    q.tol = tol;
    q.max_boxes = max_boxes;
    return q;
}

bool has_cantor(const BVFunction1D& u) { return u.variation().c > 0.0; }

/// Cheap settings: enclosures stay sound, only their width changes.
ExceedanceQuery quick(const BVFunction1D& u, double gamma, double lambda)
{
    return query(gamma, lambda, 1e-2, has_cantor(u) ? 100'000 : 1'000'000);
}

bool exceeds(const BVFunction1D& u, double x, double h, double gamma, double lambda)
{
    return std::abs(u(x + h) - u(x)) > lambda * std::pow(h, 1.0 + gamma);
}

}  // namespace

TEST_SUITE("functional1d") {

TEST_CASE("query validation")
{
    CHECK_THROWS_AS(query(0.0, 1.0, 1e-4).validate(), std::invalid_argument);
    CHECK_THROWS_AS(query(1.0, 0.0, 1e-4).validate(), std::invalid_argument);
    CHECK_THROWS_AS(query(1.0, 1.0, 0.0).validate(), std::invalid_argument);
    CHECK_NOTHROW(query(1.0, 1.0, 1e-4).validate());
    CHECK(default_tolerance(catalog::jump(), 1.0) == doctest::Approx(1e-4));
    CHECK(default_tolerance(catalog::jump(0.0, 10.0), 1.0) == doctest::Approx(1e-3));
}

TEST_CASE("truncation_radius examples")
{
    CHECK(truncation_radius(catalog::jump(), query(1.0, 100.0, 1e-4)) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(truncation_radius(catalog::jump(), query(1.0, 1.0, 1e-4)) == doctest::Approx(1.0).epsilon(1e-15));
    const BVFunction1D u2 = catalog::jump(0.0, 2.0);
    const double R = truncation_radius(u2, query(3.0, 16.0, 1e-4));
    CHECK(R == doctest::Approx(0.5946035575013605).epsilon(1e-14));
    CHECK_THROWS_AS(truncation_radius(BVFunction1D(), query(1.0, 1.0, 1e-4)), ConstantFunctionError);

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> X(-2.0, 1.0), H(R, 4.0);
    for (int i = 0; i < 10'000; ++i) CHECK_FALSE(exceeds(u2, X(gen), H(gen), 3.0, 16.0));
}

TEST_CASE("classify_box examples on a unit jump")
{
    const auto u = catalog::jump();
    const auto q = query(1.0, 1.0, 1e-4);
    CHECK(classify_box(u, make_plane_box({-0.1, -0.05}, {0.1, 0.2}), q) == BoxVerdict::inside);
    CHECK(classify_box(u, make_plane_box({0.1, 0.2}, {0.01, 0.02}), q) == BoxVerdict::outside);
    CHECK(classify_box(u, make_plane_box({-0.1, -0.05}, {0.9, 1.1}), q) == BoxVerdict::mixed);

    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int above = 0, below = 0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -0.1 + 0.05 * U(gen), h = 0.9 + 0.2 * U(gen);
        (exceeds(u, x, h, 1.0, 1.0) ? above : below)++;
    }
    CHECK(above > 0);
    CHECK(below > 0);
}

TEST_CASE("classify_box verdicts agree with sampled pairs on every catalog function")
{
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        for (double gamma : {0.5, 1.0, 2.0}) {
            const auto q = query(gamma, 10.0, 1e-4);
            int decided = 0;
            for (int b = 0; b < 400; ++b) {
                const double x0 = -1.5 + 5.5 * U(gen), xw = 0.3 * U(gen) * U(gen);
                const double h0 = 1.2 * U(gen), hw = 0.3 * U(gen) * U(gen);
                const PlaneBox box = make_plane_box({x0, x0 + xw}, {h0, h0 + hw});
                const BoxVerdict v = classify_box(f.u, box, q);
                if (v == BoxVerdict::mixed) continue;
                ++decided;
                for (int k = 0; k < 50; ++k) {
                    const double x = x0 + xw * U(gen), h = h0 + hw * U(gen);
                    if (h == 0.0) continue;
                    CHECK(exceeds(f.u, x, h, gamma, 10.0) == (v == BoxVerdict::inside));
                }
            }
            CHECK(decided > 0);
        }
    }
}

TEST_CASE("single jump: F contains 2J/(1+gamma)")
{
    for (double lambda : {1.0, 10.0, 1e3}) {
        const auto e = F_value(catalog::jump(), query(1.0, lambda, 1e-4));
        CHECK(e.tolerance_met);
        CHECK(e.enclosure.contains(1.0));
        CHECK(e.enclosure.width() <= 1e-4);
    }
    const auto m = measure_exceedance(catalog::jump(), query(1.0, 1.0, 1e-4));
    CHECK(m.enclosure.contains(0.5));
    CHECK(F_value(catalog::jump(0.0, 3.0), default_query(catalog::jump(0.0, 3.0), 0.5, 10.0)).enclosure.contains(4.0));
    CHECK(F_value(catalog::jump(0.0, -3.0), default_query(catalog::jump(0.0, -3.0), 0.5, 10.0)).enclosure.contains(4.0));
}

TEST_CASE("closed_form_jump_F")
{
    CHECK(closed_form_jump_F(1.0, 1.0) == 1.0);
    CHECK(closed_form_jump_F(1.5, 2.0) == 1.0);
    CHECK(closed_form_jump_F(1.0, 1e12) < 1e-11);
    CHECK_THROWS_AS(closed_form_jump_F(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(closed_form_jump_F(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("well separated jumps add up at large lambda")
{
    const BVFunction1D u({JumpPiece{0.0, 1.0}, JumpPiece{0.5, -2.0}});
    for (double gamma : {0.5, 1.0}) {
        const auto e = F_value(u, default_query(u, gamma, 1e4));
        CHECK(e.enclosure.contains(closed_form_jump_F(1.0, gamma) + closed_form_jump_F(2.0, gamma)));
    }
}

TEST_CASE("constant function: zero law")
{
    const auto e = F_value(BVFunction1D({}, 3.0), query(1.0, 10.0, 1e-4));
    CHECK(e.enclosure.lo == 0.0);
    CHECK(e.enclosure.hi == 0.0);
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        CHECK(F_value(f.u, quick(f.u, 1.0, 10.0)).enclosure.lo > 0.0);
    }
}

TEST_CASE("ramp against its closed form and a Monte Carlo oracle")
{
    const auto u = catalog::ramp();
    for (double gamma : {0.5, 1.0, 2.0})
        for (double lambda : {1.0, 10.0, 1e3}) {
            CAPTURE(gamma);
            CAPTURE(lambda);
            const auto e = measure_exceedance(u, default_query(u, gamma, lambda));
            CHECK(e.enclosure.contains(oracle::ramp_nu(gamma, lambda)));
        }
    const auto e = measure_exceedance(u, default_query(u, 1.0, 1e3));
    CHECK(e.enclosure.midpoint() == doctest::Approx(1e-3).epsilon(0.05));
    const double R = truncation_radius(u, default_query(u, 1.0, 1e3));
    const auto mc = oracle::exceedance_mc(u, 1.0, 1e3, {-R, 1.0}, R, 400'000, 17);
    CHECK(std::abs(mc.value - e.enclosure.midpoint()) <= 4.0 * mc.std_error + e.enclosure.width());
}

TEST_CASE("enclosures contain the Monte Carlo estimate on every catalog function")
{
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        for (double gamma : {0.5, 1.0}) {
            const double lambda = 5.0;
            const auto q = quick(f.u, gamma, lambda);
            const auto e = measure_exceedance(f.u, q);
            const double R = truncation_radius(f.u, q);
            const Interval s = f.u.derivative_support();
            const auto mc = oracle::exceedance_mc(f.u, gamma, lambda, {s.lo - R, s.hi}, R, 200'000, 23);
            CHECK(mc.value >= e.enclosure.lo - 4.0 * mc.std_error);
            CHECK(mc.value <= e.enclosure.hi + 4.0 * mc.std_error);
        }
    }
}

TEST_CASE("exceedance sets shrink as lambda grows")
{
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        Enclosure prev{};
        bool first = true;
        for (double lambda : {1.0, 3.0, 10.0, 30.0}) {
            const auto e = measure_exceedance(f.u, quick(f.u, 1.0, lambda)).enclosure;
            if (!first) {
                CHECK(e.lo <= prev.hi);
                CHECK(e.hi <= prev.hi + prev.width() + e.width());
            }
            prev = e;
            first = false;
        }
    }
}

TEST_CASE("scaling, dilation and translation invariances")
{
    const double lambda = 20.0, gamma = 1.0;
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        const auto base = [&](double l) { return F_value(f.u, quick(f.u, gamma, l)).enclosure; };
        for (double c : {0.5, 2.0, -3.0}) {
            const auto cu = f.u.scaled(c);
            const auto lhs = F_value(cu, quick(cu, gamma, lambda)).enclosure;
            const auto rhs = scaled(base(lambda / std::abs(c)), std::abs(c));
            CAPTURE(c);
            CHECK(lhs.overlaps(rhs));
        }
        for (double s : {2.0, 1.0 / 3.0}) {
            const auto du = f.u.dilated(s);
            const auto lhs = F_value(du, quick(du, gamma, lambda)).enclosure;
            CAPTURE(s);
            CHECK(lhs.overlaps(base(lambda * std::pow(s, 1.0 + gamma))));
        }
        const auto tu = f.u.translated(-7.0);
        CHECK(F_value(tu, quick(tu, gamma, lambda)).enclosure.overlaps(base(lambda)));
    }
}

TEST_CASE("tolerance flag when the split budget runs out")
{
    const auto e = F_value(catalog::cantor(), query(1.0, 100.0, 1e-6, 2'000));
    CHECK_FALSE(e.tolerance_met);
    CHECK(e.enclosure.lo <= e.enclosure.hi);
    CHECK(e.enclosure.lo >= 1.0 / 6.0 - 1e-3);
}

}
