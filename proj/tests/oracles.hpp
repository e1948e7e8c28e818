#pragma once

// Independent reference computations used by the tests. None of these call
// into the code under test except to read a function's values pointwise.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlbv/bvmodel.hpp"

namespace oracle {

/// Cantor staircase at the rational p/q by long division in base 3.
inline double cantor_rational(std::uint64_t p, std::uint64_t q, int digits = 64)
{
    if (p >= q) return 1.0;
    double value = 0.0, bit = 0.5;
    std::uint64_t r = p;
    for (int k = 0; k < digits && r != 0; ++k) {
        const unsigned __int128 t = static_cast<unsigned __int128>(r) * 3;
        const auto d = static_cast<unsigned>(t / q);
        r = static_cast<std::uint64_t>(t % q);
        if (d == 1) return value + bit;
        if (d == 2) value += bit;
        bit *= 0.5;
    }
    return value;
}

inline constexpr double kCantorAlpha = 0.63092975357145743710;  // log 2 / log 3

/// Monte Carlo estimate of nu_gamma(E') with h drawn from the kernel density
/// on [0, R] and x uniform on `xs`. Returns {estimate, standard error}.
struct MCResult {
    double value;
    double std_error;
};

inline MCResult exceedance_mc(const nlbv::BVFunction1D& u, double gamma, double lambda, nlbv::Interval xs, double R,
                              std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs.lo + xs.length() * U(gen);
        const double h = R * std::pow(U(gen), 1.0 / gamma);
        if (std::abs(u(x + h) - u(x)) > lambda * std::pow(h, 1.0 + gamma)) ++hits;
    }
    const double mass = xs.length() * std::pow(R, gamma) / gamma;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return {mass * p, mass * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

/// nu_gamma(E') for the slope-1 ramp on [0,1] with lambda >= 1:
/// interior strip 1/(gamma lambda) minus the two corner deficits.
inline double ramp_nu(double gamma, double lambda)
{
    const double g = gamma;
    return 1.0 / (g * lambda) - std::pow(lambda, -(1.0 + g) / g) / ((1.0 + 2.0 * g) * (1.0 + g));
}

/// Largest |u(y) - u(x)| over n random pairs in I.
inline double sampled_oscillation(const nlbv::BVFunction1D& u, nlbv::Interval I, std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> U(I.lo, I.hi);
    double best = std::abs(u(I.hi) - u(I.lo));
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(u(U(gen)) - u(U(gen))));
    return best;
}

/// Sum of |u(t_{k+1}) - u(t_k)| on a uniform partition of I with n cells.
inline double partition_variation(const std::function<double(double)>& f, nlbv::Interval I, std::size_t n)
{
    double s = 0.0, prev = f(I.lo);
    for (std::size_t k = 1; k <= n; ++k) {
        const double cur = f(I.lo + I.length() * static_cast<double>(k) / static_cast<double>(n));
        s += std::abs(cur - prev);
        prev = cur;
    }
    return s;
}

/// H^k(S^k) by the recursion |S^k| = |S^(k-1)| int_0^pi sin^(k-1), |S^0| = 2.
inline double sphere_measure(int k)
{
    double s = 2.0;
    for (int d = 1; d <= k; ++d) {
        auto f = [d](double t) { return std::pow(std::sin(t), d - 1); };
        s *= boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi, 10, 1e-14);
    }
    return s;
}

/// int_{S^(N-1)} |x_1| in polar angle about e_1.
inline double sphere_abs_x1(int N)
{
    if (N == 1) return 2.0;
    auto f = [N](double t) { return std::abs(std::cos(t)) * std::pow(std::sin(t), N - 2); };
    const double half = std::numbers::pi / 2;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double I = GK::integrate(f, 0.0, half, 10, 1e-14) + GK::integrate(f, half, std::numbers::pi, 10, 1e-14);
    return sphere_measure(N - 2) * I;
}

}  // namespace oracle
