#pragma once

// N-dimensional fields evaluated through their line sections
//     F(u) = 1/C_1 * int_{S^{N-1}} dsigma int_{sigma-perp} F(u_{sigma,z}) dz,
//     u_{sigma,z}(t) = u(z + sigma t),
// with the double integral estimated by Monte Carlo over directions and over
// the (N-1)-disk of radius R in sigma-perp outside which sections are constant.

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "nlbv/bvmodel.hpp"

namespace nlbv {

using VecN = std::vector<double>;

/// C_N = int_{S^{N-1}} |x_1| dH^{N-1} = 2 vol(B^{N-1}).
double c_n_constant(int N);
/// H^{N-1}(S^{N-1}).
double sphere_area(int N);
/// Lebesgue volume of the unit ball in R^d (1 for d = 0).
double ball_volume(int d);

struct BallIndicator {
    VecN center;
    double radius = 1.0;
    double height = 1.0;
};

/// u(x) = g(|x - center|) - g(r1), where g is a catalog profile on [r0, r1], r0 >= 0.
struct RadialSmooth {
    VecN center;
    CatalogProfile profile;
};

/// u(x) = slope * clamp((x - center) . direction, c0, c1), observed through the
/// window |z - center_perp| <= window_radius on every line.
struct AffineClamp {
    VecN center;
    VecN direction;
    double slope = 1.0;
    Interval clamp{0.0, 1.0};
    double window_radius = 1.0;
};

class FieldND {
public:
    using Kind = std::variant<BallIndicator, RadialSmooth, AffineClamp>;

    FieldND(int dimension, Kind kind);

    [[nodiscard]] int dimension() const noexcept { return n_; }
    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] const char* kind_name() const noexcept;
    [[nodiscard]] const VecN& center() const noexcept;

    /// Lines farther than this from center() have constant sections.
    [[nodiscard]] double section_radius() const noexcept;
    /// Sampling radius about the origin: |center| + section_radius.
    [[nodiscard]] double bounding_radius() const noexcept;
    [[nodiscard]] VariationTriple variation() const;

    [[nodiscard]] FieldND translated(const VecN& d) const;
    /// Applies the orthogonal matrix q (row-major, N x N).
    [[nodiscard]] FieldND rotated(const std::vector<double>& q) const;

private:
    int n_;
    Kind kind_;
};

struct SectionLine {
    VecN sigma;
    VecN z;
};

/// Validates |sigma| = 1 and z . sigma = 0 within 1e-12.
SectionLine make_section_line(VecN sigma, VecN z);

BVFunction1D extract_section(const FieldND& f, const SectionLine& line);

/// Orthonormal basis of sigma-perp, a deterministic function of sigma.
std::vector<VecN> perp_frame(const VecN& sigma);

/// Philox4x32-10 counter-based generator.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    explicit Philox4x32(std::uint64_t seed) noexcept;
    [[nodiscard]] Block operator()(Block counter) const noexcept;

private:
    std::array<std::uint32_t, 2> key_;
};

/// Random line for sample `index`: sigma uniform on S^{N-1}, z uniform in the
/// radius-R disk of sigma-perp.
SectionLine sample_line(const Philox4x32& rng, std::uint64_t index, int N, double R);

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double systematic = 0.0;       ///< factor * mean enclosure half-width
    std::size_t failures = 0;      ///< 1D evaluations that threw
    std::size_t tolerance_misses = 0;
    bool flagged = false;          ///< failures above 0.1% of samples
};

MCEstimate F_nd_estimate(const FieldND& f, double gamma, double lambda, std::size_t samples, std::uint64_t seed,
                         double tol_1d, unsigned threads = 1);

enum class VariationPart { a, j, c };

VariationPart variation_part_from_string(const std::string& s);
const char* to_string(VariationPart p) noexcept;

/// MC estimate of int dsigma int dz |D^part u_{sigma,z}|; compare with C_N |D^part u|.
MCEstimate sectioning_variation_check(const FieldND& f, VariationPart which, std::size_t samples, std::uint64_t seed,
                                      unsigned threads = 1);

/// |mean - target| <= 3 stderr + systematic (+ a few ulps of the target).
bool mc_agrees(const MCEstimate& e, double target) noexcept;

}  // namespace nlbv
