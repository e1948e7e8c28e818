#include "doctest.h"

#include <random>

#include "catalog.hpp"
#include "nlbv/bvmodel.hpp"
#include "oracles.hpp"

using namespace nlbv;

namespace {

/// Holder bound on |c(x) - c(y)| for |x - y| <= d.
double holder(double d) { return 2.0 * std::pow(d, oracle::kCantorAlpha); }

}  // namespace

TEST_SUITE("bvmodel") {

TEST_CASE("eval uses the right-continuous representative")
{
    const auto u = catalog::jump();
    CHECK(u(-1.0) == 0.0);
    CHECK(u(0.0) == 1.0);
    CHECK(u.left_limit(0.0) == 0.0);
    CHECK(u(1.0) == 1.0);
}

TEST_CASE("cantor_eval endpoints and dyadic points match the ternary oracle")
{
    CHECK(cantor_eval(0.0) == 0.0);
    CHECK(cantor_eval(1.0) == 1.0);
    CHECK_THROWS_AS(cantor_eval(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(cantor_eval(1.5), std::invalid_argument);

    // Dyadic rationals are exact doubles, so the comparison is exact at 64 digits.
    std::mt19937_64 gen(11);
    for (int i = 0; i < 2000; ++i) {
        const unsigned m = 1 + static_cast<unsigned>(gen() % 52);
        const std::uint64_t q = std::uint64_t{1} << m;
        const std::uint64_t p = gen() % q;
        const double t = static_cast<double>(p) / static_cast<double>(q);
        CHECK(std::abs(cantor_eval(t) - oracle::cantor_rational(p, q)) <= 0x1p-62);
    }
}

TEST_CASE("cantor_eval at non-dyadic rationals is within the Holder bound of the exact value")
{
    struct R {
        std::uint64_t p, q;
        double expect;
    };
    for (const R r : {R{1, 3, 0.5}, R{1, 9, 0.25}, R{2, 3, 0.5}, R{7, 9, 0.75}, R{1, 4, 1.0 / 3.0}}) {
        const double t = static_cast<double>(r.p) / static_cast<double>(r.q);
        // t differs from p/q by at most half an ulp.
        const double representation_error = std::ldexp(t, -52);
        CHECK(oracle::cantor_rational(r.p, r.q) == doctest::Approx(r.expect).epsilon(1e-15));
        CHECK(std::abs(cantor_eval(t) - r.expect) <= holder(representation_error));
    }
}

TEST_CASE("cantor staircase self-similarity and symmetry")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double t = U(gen);
        const double third = t / 3.0;  // rounded: compare within the Holder modulus of that rounding
        CHECK(std::abs(cantor_eval(third) - cantor_eval(t) / 2.0) <= holder(std::ldexp(third, -52)) + 0x1p-62);
        // For t in [1/2, 1] the subtraction 1 - t is exact.
        const double s = 0.5 + 0.5 * t;
        CHECK(std::abs(cantor_eval(1.0 - s) - (1.0 - cantor_eval(s))) <= 0x1p-62);
    }
}

TEST_CASE("eval of a Cantor piece")
{
    const auto u = catalog::cantor();
    CHECK(std::abs(u(1.0 / 3.0) - 0.5) <= holder(0x1p-54));
    CHECK(u(-1.0) == 0.0);
    CHECK(u(2.0) == 1.0);
    const auto v = catalog::cantor({2.0, 5.0}, -2.0);
    CHECK(v(3.0) == doctest::Approx(-1.0));
    CHECK(v(5.0) == -2.0);
}

TEST_CASE("oscillation_bound examples")
{
    const auto oc = oscillation_bound(catalog::cantor(), {0.0, 1.0 / 3.0});
    CHECK(oc.lower_exact);
    CHECK(std::abs(oc.osc - 0.5) <= holder(0x1p-54));

    const auto oj = oscillation_bound(catalog::jump(0.0, 2.0), {-1.0, 1.0});
    CHECK(oj.lower_exact);
    CHECK(oj.osc == 2.0);

    const auto orp = oscillation_bound(catalog::ramp({0.0, 1.0}, 3.0), {0.0, 0.1});
    CHECK(orp.lower_exact);
    CHECK(orp.osc == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("oscillation_bound dominates sampled oscillation on every catalog function")
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> U(-1.5, 4.5);
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        for (int k = 0; k < 20; ++k) {
            double a = U(gen), b = U(gen);
            if (a > b) std::swap(a, b);
            const double sampled = oracle::sampled_oscillation(f.u, {a, b}, 10'000, gen());
            const auto ob = oscillation_bound(f.u, {a, b});
            CHECK(ob.osc >= sampled * (1.0 - 1e-12));
            if (ob.lower_exact) CHECK(ob.osc <= sampled + 1e-2 * (b - a) + 1e-3 * std::max(1.0, ob.osc));
        }
    }
}

TEST_CASE("variation_decomposition examples")
{
    const BVFunction1D rj({SmoothPiece(CatalogProfile::affine_ramp({0.0, 1.0}, 1.0)), JumpPiece{2.0, 0.5}});
    const VariationTriple v = variation_decomposition(rj);
    CHECK(v.a == doctest::Approx(1.0));
    CHECK(v.j == 0.5);
    CHECK(v.c == 0.0);

    const VariationTriple c = variation_decomposition(catalog::cantor());
    CHECK(c.a == 0.0);
    CHECK(c.j == 0.0);
    CHECK(c.c == 1.0);

    const VariationTriple jj = variation_decomposition(BVFunction1D({JumpPiece{0.0, 1.0}, JumpPiece{1.0, -2.0}}));
    CHECK(jj.j == 3.0);
}

TEST_CASE("variation parts equal fine-partition sums of the isolated pieces")
{
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        VariationTriple sums;
        for (const Piece& p : f.u.pieces()) {
            const BVFunction1D alone({p});
            const Interval s = piece_support(p);
            const Interval I{s.lo - 0.25, s.hi + 0.25};
            const double tv = oracle::partition_variation([&](double t) { return alone(t); }, I, 1'000'000);
            if (std::holds_alternative<SmoothPiece>(p)) sums.a += tv;
            if (std::holds_alternative<JumpPiece>(p)) sums.j += tv;
            if (std::holds_alternative<CantorPiece>(p)) sums.c += tv;
        }
        const VariationTriple v = f.u.variation();
        CHECK(v.a == doctest::Approx(sums.a).epsilon(1e-6));
        CHECK(v.j == doctest::Approx(sums.j).epsilon(1e-6));
        CHECK(v.c == doctest::Approx(sums.c).epsilon(1e-6));
    }
}

TEST_CASE("smooth pieces: constant outside support, Lipschitz bound and exact_tv")
{
    const std::vector<CatalogProfile> profiles = {
        CatalogProfile::affine_ramp({0.0, 1.0}, 2.0),        CatalogProfile::smoothstep({-1.0, 3.0}, -1.0),
        CatalogProfile::sine_ramp({0.5, 0.75}, 0.2),         CatalogProfile::polynomial({0.0, 2.0}, {0.0, 1.0, 2.0, -4.0}),
        CatalogProfile::polynomial({0.0, 1.0}, {0.0, 0.0, 1.0}),
    };
    std::mt19937_64 gen(9);
    for (const auto& p : profiles) {
        const SmoothPiece sp(p);
        const Interval s = sp.support();
        CHECK(sp.value(s.lo - 1.0) == sp.value(s.lo));
        CHECK(sp.value(s.hi + 1.0) == sp.value(s.hi));
        std::uniform_real_distribution<double> U(s.lo, s.hi);
        double worst = 0.0;
        for (int i = 0; i < 10'000; ++i) {
            const double x = U(gen), y = U(gen);
            if (x != y) worst = std::max(worst, std::abs(sp.value(x) - sp.value(y)) / std::abs(x - y));
        }
        CHECK(sp.lipschitz_bound() >= worst * (1.0 - 1e-9));
        const double tv = oracle::partition_variation([&](double t) { return sp.value(t); }, s, 1'000'000);
        CHECK(sp.exact_tv() == doctest::Approx(tv).epsilon(1e-6));
    }
}

TEST_CASE("eval is monotone where all pieces share an orientation")
{
    const BVFunction1D u({SmoothPiece(CatalogProfile::smoothstep({0.0, 1.0}, 1.0)), JumpPiece{0.5, 0.25},
                          CantorPiece{{0.2, 0.9}, 0.5}});
    double prev = u(-0.1);
    for (int k = 0; k <= 10'000; ++k) {
        const double t = -0.1 + 1.2 * k / 10'000.0;
        const double cur = u(t);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("transforms act on the argument and the value")
{
    for (const auto& f : catalog::functions()) {
        CAPTURE(f.name);
        const auto t = f.u.translated(7.0);
        const auto d = f.u.dilated(2.0);
        const auto s = f.u.scaled(-3.0);
        for (double x : {-1.3, -0.2, 0.1, 0.37, 0.8, 1.6, 2.5, 3.3, 3.9}) {
            // x + 7 - 7 may be off by an ulp of 8, which Cantor pieces amplify to the Holder modulus.
            CHECK(std::abs(t(x + 7.0) - f.u(x)) <= holder(std::ldexp(8.0, -52)) + 1e-12);
            CHECK(d(2.0 * x) == doctest::Approx(f.u(x)).epsilon(1e-12));
            CHECK(s(x) == doctest::Approx(-3.0 * f.u(x)).epsilon(1e-12));
        }
        CHECK(s.variation().total() == doctest::Approx(3.0 * f.u.variation().total()));
        CHECK(d.variation().total() == doctest::Approx(f.u.variation().total()));
    }
}

TEST_CASE("construction merges coincident jumps and rejects non-finite data")
{
    const BVFunction1D u({JumpPiece{0.0, 1.0}, JumpPiece{0.0, -1.0}});
    CHECK(u.is_constant());
    CHECK_THROWS_AS(BVFunction1D({JumpPiece{INFINITY, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(BVFunction1D({CantorPiece{{1.0, 0.0}, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(CatalogProfile::affine_ramp({1.0, 1.0}, 1.0), std::invalid_argument);
}

}
