#pragma once

// lambda-sweeps of F, limit estimation, and the large-lambda bounds
//     liminf F >= C_N (a/g + j/(1+g) + g c / (2 (1+2g)(1+g)))
//     lim F     = C_N (a/g + j/(1+g))            (no Cantor part)
// together with the closed-form masses of the lower-bound region families.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlbv/functional1d.hpp"

namespace nlbv {

/// n points from lo to hi with constant ratio; endpoints are exact.
std::vector<double> geometric_grid(double lo, double hi, int points);

struct SweepOptions {
    double tol = 0.0;  ///< F tolerance per point; 0 selects default_tolerance
    int max_depth = 40;
    std::size_t max_boxes = 4'000'000;
    unsigned threads = 1;
};

struct SweepResult {
    std::string function_id;
    double gamma = 1.0;
    std::vector<double> lambdas;
    std::vector<Enclosure> enclosures;
    std::vector<char> tolerance_met;
    std::vector<std::string> errors;  ///< empty string where the point succeeded
    std::vector<double> seconds;      ///< wall time per point

    [[nodiscard]] std::size_t size() const noexcept { return lambdas.size(); }
    [[nodiscard]] bool ok(std::size_t i) const { return errors[i].empty(); }
};

SweepResult lambda_sweep(const BVFunction1D& u, double gamma, double lambda_min, double lambda_max, int points,
                         const SweepOptions& options = {}, std::string function_id = "u");

struct LimitEstimate {
    double estimate = 0.0;
    double spread = 0.0;
    std::size_t window_begin = 0;  ///< first index of the tail window
};

/// Midpoint mean and max(hi) - min(lo) over the last ceil(tail_fraction * n) points.
LimitEstimate limit_estimate(const SweepResult& s, double tail_fraction);

class TheoremInapplicable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double liminf_rhs(const VariationTriple& v, double gamma, int N);
/// Throws TheoremInapplicable when v.c > 0.
double sbv_target(const VariationTriple& v, double gamma, int N);

struct TheoremVerdict {
    double rhs_liminf = 0.0;
    std::optional<double> rhs_sbv;
    double tail_lo = 0.0;
    double tail_hi = 0.0;
    double estimate = 0.0;
    double spread = 0.0;
    bool pass_liminf = false;
    std::optional<bool> pass_sbv;
    /// Smallest grid lambda from which every enclosure low clears rhs_liminf (1 - slack).
    std::optional<double> lambda_threshold;
};

/// slack is relative: pass_liminf <=> tail_lo >= rhs_liminf (1 - slack),
/// pass_sbv <=> |estimate - rhs_sbv| <= slack rhs_sbv.
TheoremVerdict theorem_verdict(const SweepResult& s, const VariationTriple& v, int N, double tail_fraction,
                               double slack);

/// Sum of delta_i^(1+g) / (1+g).
double gadget_J_measure(const std::vector<double>& radii, double gamma);
/// Sum of g r_i^(1+g) / ((1+2g)(1+g)).
double gadget_C_measure(const std::vector<double>& radii, double gamma);
/// (1 - eps) / (g lambda) * da_mass.
double gadget_A_mass(double da_mass, double epsilon, double gamma, double lambda);

/// CSV with header lambda,F_lo,F_hi,rhs_liminf,sbv_target.
void write_sweep_csv(std::ostream& out, const SweepResult& s, double rhs_liminf, std::optional<double> sbv);

}  // namespace nlbv
