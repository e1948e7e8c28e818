#include "doctest.h"

#include <numbers>

#include "nlbv/asymptotics.hpp"
#include "nlbv/sectionnd.hpp"
#include "oracles.hpp"

using namespace nlbv;

namespace {

constexpr double kPi = std::numbers::pi;

FieldND unit_disk() { return FieldND(2, BallIndicator{{0.0, 0.0}, 1.0, 1.0}); }

FieldND radial_bump() { return FieldND(2, RadialSmooth{{0.0, 0.0}, CatalogProfile::smoothstep({0.0, 1.0}, -1.0)}); }

FieldND clamp_field()
{
    return FieldND(2, AffineClamp{{0.0, 0.0}, {1.0, 0.0}, 1.0, {0.0, 1.0}, 1.0});
}

/// Jump locations of a section, sorted.
std::vector<double> jumps_of(const BVFunction1D& u)
{
    std::vector<double> out;
    for (const Piece& p : u.pieces())
        if (const auto* j = std::get_if<JumpPiece>(&p)) out.push_back(j->location);
    std::sort(out.begin(), out.end());
    return out;
}

/// Rotation by angle t in the (i, k) plane of R^N, row-major.
std::vector<double> givens(int N, int i, int k, double t)
{
    std::vector<double> q(static_cast<std::size_t>(N * N), 0.0);
    for (int d = 0; d < N; ++d) q[static_cast<std::size_t>(d * N + d)] = 1.0;
    q[static_cast<std::size_t>(i * N + i)] = std::cos(t);
    q[static_cast<std::size_t>(k * N + k)] = std::cos(t);
    q[static_cast<std::size_t>(i * N + k)] = -std::sin(t);
    q[static_cast<std::size_t>(k * N + i)] = std::sin(t);
    return q;
}

bool intervals_overlap(const MCEstimate& a, const MCEstimate& b)
{
    const double ra = 3.0 * a.std_error + a.systematic, rb = 3.0 * b.std_error + b.systematic;
    return std::abs(a.mean - b.mean) <= ra + rb;
}

}  // namespace

TEST_SUITE("sectionnd") {

TEST_CASE("C_N against direct sphere quadrature")
{
    CHECK(c_n_constant(1) == 2.0);
    CHECK(c_n_constant(2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(c_n_constant(3) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    for (int N = 1; N <= 4; ++N) {
        CAPTURE(N);
        CHECK(std::abs(c_n_constant(N) / oracle::sphere_abs_x1(N) - 1.0) <= 1e-6);
        CHECK(std::abs(sphere_area(N) / oracle::sphere_measure(N - 1) - 1.0) <= 1e-10);
    }
    CHECK_THROWS_AS(c_n_constant(0), std::invalid_argument);
}

TEST_CASE("Philox4x32-10 known answer")
{
    const Philox4x32 zero(0);
    const auto b = zero({0, 0, 0, 0});
    CHECK(b[0] == 0x6627e8d5u);
    CHECK(b[1] == 0xe169c58du);
    CHECK(b[2] == 0xbc57ac4cu);
    CHECK(b[3] == 0x9b00dbd8u);
}

TEST_CASE("section lines are validated")
{
    CHECK_NOTHROW(make_section_line({1.0, 0.0}, {0.0, 0.5}));
    CHECK_THROWS_AS(make_section_line({1.0, 0.1}, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_section_line({1.0, 0.0}, {0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(make_section_line({1.0, 0.0, 0.0}, {0.0, 0.5}), std::invalid_argument);
}

TEST_CASE("ball sections")
{
    const auto f = unit_disk();
    const auto d0 = extract_section(f, make_section_line({1.0, 0.0}, {0.0, 0.0}));
    const auto j0 = jumps_of(d0);
    REQUIRE(j0.size() == 2);
    CHECK(j0[0] == doctest::Approx(-1.0));
    CHECK(j0[1] == doctest::Approx(1.0));
    CHECK(d0(0.0) == 1.0);
    CHECK(d0(-2.0) == 0.0);
    CHECK(d0(2.0) == 0.0);

    const auto d6 = extract_section(f, make_section_line({0.0, 1.0}, {0.6, 0.0}));
    const auto j6 = jumps_of(d6);
    REQUIRE(j6.size() == 2);
    CHECK(j6[0] == doctest::Approx(-0.8).epsilon(1e-14));
    CHECK(j6[1] == doctest::Approx(0.8).epsilon(1e-14));

    CHECK(extract_section(f, make_section_line({1.0, 0.0}, {0.0, 1.5})).is_constant());
}

TEST_CASE("radial and clamp sections reproduce the field pointwise")
{
    const auto r = radial_bump();
    const auto c = clamp_field();
    const auto line = make_section_line({0.6, 0.8}, {-0.8 * 0.3, 0.6 * 0.3});
    const auto ur = extract_section(r, line);
    const auto uc = extract_section(c, line);
    for (double t : {-2.0, -0.7, -0.1, 0.0, 0.4, 0.9, 2.0}) {
        const double x = line.z[0] + t * line.sigma[0], y = line.z[1] + t * line.sigma[1];
        const double rho = std::hypot(x, y);
        const auto& g = std::get<RadialSmooth>(r.kind()).profile;
        CHECK(ur(t) == doctest::Approx(g.value(rho) - g.value(1.0)).epsilon(1e-12));
        CHECK(uc(t) == doctest::Approx(std::clamp(x, 0.0, 1.0)).epsilon(1e-12));
    }
    // Outside the window the clamp field is not observed.
    CHECK(extract_section(c, make_section_line({1.0, 0.0}, {0.0, 1.5})).is_constant());
}

TEST_CASE("perp_frame is orthonormal and deterministic")
{
    const Philox4x32 rng(99);
    for (int N : {2, 3, 5}) {
        for (std::uint64_t i = 0; i < 200; ++i) {
            const auto line = sample_line(rng, i, N, 2.0);
            const auto frame = perp_frame(line.sigma);
            REQUIRE(frame.size() == static_cast<std::size_t>(N - 1));
            for (std::size_t a = 0; a < frame.size(); ++a) {
                double ds = 0.0;
                for (int k = 0; k < N; ++k) ds += frame[a][k] * line.sigma[k];
                CHECK(std::abs(ds) < 1e-13);
                for (std::size_t b = a; b < frame.size(); ++b) {
                    double d = 0.0;
                    for (int k = 0; k < N; ++k) d += frame[a][k] * frame[b][k];
                    CHECK(std::abs(d - (a == b ? 1.0 : 0.0)) < 1e-13);
                }
            }
            const auto again = sample_line(rng, i, N, 2.0);
            CHECK(again.sigma == line.sigma);
            CHECK(again.z == line.z);
        }
    }
}

TEST_CASE("field variations")
{
    const auto v = unit_disk().variation();
    CHECK(v.a == 0.0);
    CHECK(v.j == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(v.c == 0.0);

    // |D u| of x -> g(|x|) is int |g'(r)| 2 pi r dr; smoothstep 3s^2 - 2s^3 falling by 1 gives 2 pi * 1/2.
    CHECK(radial_bump().variation().a == doctest::Approx(kPi).epsilon(1e-12));

    // Every windowed line sees the full rise m w, so C_2 a = |S^1| * 2R * m w with R = m = w = 1.
    CHECK(clamp_field().variation().a == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("sectioning identities hold for every variation part")
{
    for (const FieldND& f : {unit_disk(), radial_bump(), clamp_field()}) {
        CAPTURE(f.kind_name());
        const VariationTriple v = f.variation();
        const double C = c_n_constant(f.dimension());
        const double targets[] = {C * v.a, C * v.j, C * v.c};
        for (VariationPart p : {VariationPart::a, VariationPart::j, VariationPart::c}) {
            CAPTURE(to_string(p));
            const auto e = sectioning_variation_check(f, p, 4000, 7, 4);
            CHECK(mc_agrees(e, targets[static_cast<int>(p)]));
        }
    }
    const auto j = sectioning_variation_check(unit_disk(), VariationPart::j, 10'000, 1);
    CHECK(j.mean == doctest::Approx(8.0 * kPi).epsilon(1e-12));
}

TEST_CASE("F_nd_estimate: constant field, reproducibility across threads")
{
    const FieldND zero(2, BallIndicator{{0.0, 0.0}, 1.0, 0.0});
    const auto z = F_nd_estimate(zero, 1.0, 10.0, 100, 3, 1e-2);
    CHECK(z.mean == 0.0);
    CHECK(z.std_error == 0.0);

    const auto a = F_nd_estimate(radial_bump(), 1.0, 10.0, 40, 5, 1e-2, 1);
    const auto b = F_nd_estimate(radial_bump(), 1.0, 10.0, 40, 5, 1e-2, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.systematic == b.systematic);
    CHECK(a.seed == 5);
    CHECK(a.samples == 40);
}

TEST_CASE("F_nd_estimate is invariant under translation and rotation")
{
    // Radial sections are costly to resolve, so that field gets fewer samples.
    const double gamma = 1.0, lambda = 10.0;
    for (const FieldND& f : {unit_disk(), radial_bump(), clamp_field()}) {
        CAPTURE(f.kind_name());
        const std::size_t n = std::holds_alternative<RadialSmooth>(f.kind()) ? 60 : 500;
        const auto base = F_nd_estimate(f, gamma, lambda, n, 11, 1e-2, 4);
        const auto moved = F_nd_estimate(f.translated({0.7, -1.3}), gamma, lambda, n, 12, 1e-2, 4);
        const auto turned = F_nd_estimate(f.rotated(givens(2, 0, 1, 0.9)), gamma, lambda, n, 13, 1e-2, 4);
        CHECK(intervals_overlap(base, moved));
        CHECK(intervals_overlap(base, turned));
    }
}

TEST_CASE("3D ball: variation identity")
{
    const FieldND ball(3, BallIndicator{{0.2, 0.0, -0.1}, 0.8, 2.0});
    const auto v = ball.variation();
    CHECK(v.j == doctest::Approx(2.0 * 4.0 * kPi * 0.64).epsilon(1e-14));
    CHECK(mc_agrees(sectioning_variation_check(ball, VariationPart::j, 4000, 3, 4), c_n_constant(3) * v.j));
}

TEST_CASE("large lambda: plane fields approach the SBV target")
{
    const auto e = F_nd_estimate(clamp_field(), 1.0, 1e4, 2000, 21, 1e-2, 4);
    const double target = sbv_target(clamp_field().variation(), 1.0, 2);
    CHECK(std::abs(e.mean - target) <= 3.0 * e.std_error + e.systematic + 0.01 * target);
}

}
