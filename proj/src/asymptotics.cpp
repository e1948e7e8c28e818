#include "nlbv/asymptotics.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "nlbv/format.hpp"
#include "nlbv/parallel.hpp"
#include "nlbv/sectionnd.hpp"

namespace nlbv {

std::vector<double> geometric_grid(double lo, double hi, int points)
{
    require(std::isfinite(lo) && std::isfinite(hi) && 0.0 < lo && lo < hi, "lambda grid: need 0 < min < max");
    require(points >= 2, "lambda grid: need at least 2 points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    // Interpolating decimal exponents keeps decade grids exact (10^k).
    const double a = std::log10(lo), b = std::log10(hi);
    for (int i = 0; i < points; ++i) grid[i] = std::pow(10.0, a + (b - a) * i / (points - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

SweepResult lambda_sweep(const BVFunction1D& u, double gamma, double lambda_min, double lambda_max, int points,
                         const SweepOptions& options, std::string function_id)
{
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0 (the functionals are studied for gamma > 0)");
    SweepResult s;
    s.function_id = std::move(function_id);
    s.gamma = gamma;
    s.lambdas = geometric_grid(lambda_min, lambda_max, points);
    const std::size_t n = s.lambdas.size();
    s.enclosures.assign(n, {});
    s.tolerance_met.assign(n, 0);
    s.errors.assign(n, {});
    s.seconds.assign(n, 0.0);
    const double tol = options.tol > 0.0 ? options.tol : default_tolerance(u, gamma);

    parallel_for(n, options.threads, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        try {
            ExceedanceQuery q;
            q.gamma = gamma;
            q.lambda = s.lambdas[i];
            q.tol = tol;
            q.max_depth = options.max_depth;
            q.max_boxes = options.max_boxes;
            const Evaluation e = F_value(u, q);
            s.enclosures[i] = e.enclosure;
            s.tolerance_met[i] = e.tolerance_met ? 1 : 0;
        } catch (const std::exception& ex) {
            s.enclosures[i] = {std::nan(""), std::nan("")};
            s.errors[i] = ex.what();
        }
        s.seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
    return s;
}

LimitEstimate limit_estimate(const SweepResult& s, double tail_fraction)
{
    require(s.size() >= 4, "limit_estimate: sweep needs at least 4 points");
    require(tail_fraction > 0.0 && tail_fraction < 1.0, "limit_estimate: tail_fraction must lie in (0,1)");
    const auto n = s.size();
    const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
    LimitEstimate out;
    out.window_begin = n - window;
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    std::size_t used = 0;
    for (std::size_t i = out.window_begin; i < n; ++i) {
        if (!s.ok(i)) continue;
        sum += s.enclosures[i].midpoint();
        lo = std::min(lo, s.enclosures[i].lo);
        hi = std::max(hi, s.enclosures[i].hi);
        ++used;
    }
    if (used == 0) throw std::domain_error("limit_estimate: no successful point in the tail window");
    out.estimate = sum / static_cast<double>(used);
    out.spread = hi - lo;
    return out;
}

double liminf_rhs(const VariationTriple& v, double gamma, int N)
{
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    const double g = gamma;
    return c_n_constant(N) * (v.a / g + v.j / (1.0 + g) + g * v.c / (2.0 * (1.0 + 2.0 * g) * (1.0 + g)));
}

double sbv_target(const VariationTriple& v, double gamma, int N)
{
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    if (v.c > 0.0) throw TheoremInapplicable("sbv_target: u has a Cantor part, the SBV limit does not apply");
    return c_n_constant(N) * (v.a / gamma + v.j / (1.0 + gamma));
}

TheoremVerdict theorem_verdict(const SweepResult& s, const VariationTriple& v, int N, double tail_fraction,
                               double slack)
{
    require(slack >= 0.0, "slack must be >= 0");
    TheoremVerdict out;
    out.rhs_liminf = liminf_rhs(v, s.gamma, N);
    const LimitEstimate le = limit_estimate(s, tail_fraction);
    out.estimate = le.estimate;
    out.spread = le.spread;

    out.tail_lo = INFINITY;
    out.tail_hi = -INFINITY;
    bool tail_complete = true;
    for (std::size_t i = le.window_begin; i < s.size(); ++i) {
        if (!s.ok(i)) {
            tail_complete = false;
            continue;
        }
        out.tail_lo = std::min(out.tail_lo, s.enclosures[i].lo);
        out.tail_hi = std::max(out.tail_hi, s.enclosures[i].hi);
    }
    const double floor = out.rhs_liminf * (1.0 - slack);
    out.pass_liminf = tail_complete && out.tail_lo >= floor;

    for (std::size_t i = s.size(); i-- > 0;) {
        if (!s.ok(i) || s.enclosures[i].lo < floor) break;
        out.lambda_threshold = s.lambdas[i];
    }

    if (v.c == 0.0) {
        out.rhs_sbv = sbv_target(v, s.gamma, N);
        out.pass_sbv = tail_complete && std::abs(out.estimate - *out.rhs_sbv) <= slack * *out.rhs_sbv;
    }
    return out;
}

double gadget_J_measure(const std::vector<double>& radii, double gamma)
{
    const Gamma g(gamma);
    double s = 0.0;
    for (double d : radii) s += nu_triangle(d, g);
    return s;
}

double gadget_C_measure(const std::vector<double>& radii, double gamma)
{
    const Gamma g(gamma);
    double s = 0.0;
    for (double r : radii) s += nu_curved(r, g);
    return s;
}

double gadget_A_mass(double da_mass, double epsilon, double gamma, double lambda)
{
    require(std::isfinite(da_mass) && da_mass >= 0.0, "gadget_A_mass: da_mass must be >= 0");
    require(epsilon >= 0.0 && epsilon < 1.0, "gadget_A_mass: epsilon must lie in [0,1)");
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0");
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    return (1.0 - epsilon) / (gamma * lambda) * da_mass;
}

void write_sweep_csv(std::ostream& out, const SweepResult& s, double rhs_liminf, std::optional<double> sbv)
{
    out << "lambda,F_lo,F_hi,rhs_liminf,sbv_target\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.lambdas[i]) << ',';
        if (s.ok(i))
            out << format_double(s.enclosures[i].lo) << ',' << format_double(s.enclosures[i].hi);
        else
            out << ',';
        out << ',' << format_double(rhs_liminf) << ',';
        if (sbv) out << format_double(*sbv);
        out << '\n';
    }
}

}  // namespace nlbv
