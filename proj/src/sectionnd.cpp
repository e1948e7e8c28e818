#include "nlbv/sectionnd.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "nlbv/functional1d.hpp"
#include "nlbv/parallel.hpp"
#include "nlbv/summation.hpp"

namespace nlbv {

namespace {

double dot(const VecN& a, const VecN& b) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const VecN& a) noexcept { return std::sqrt(dot(a, a)); }

/// Distance from c to the line z + sigma t, and the parameter of the foot point.
std::pair<double, double> line_offset(const SectionLine& line, const VecN& c)
{
    const std::size_t n = c.size();
    VecN d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = c[i] - line.z[i];
    const double t0 = dot(d, line.sigma);
    for (std::size_t i = 0; i < n; ++i) d[i] -= t0 * line.sigma[i];
    return {norm(d), t0};
}

void check_vec(const VecN& v, int n, const char* name)
{
    require(static_cast<int>(v.size()) == n, std::string(name) + " must have one entry per dimension");
    for (double x : v) require_finite(x, name);
}

}  // namespace

double ball_volume(int d)
{
    require(d >= 0, "ball_volume: dimension must be >= 0");
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double sphere_area(int N)
{
    require(N >= 1, "sphere_area: N must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

double c_n_constant(int N)
{
    require(N >= 1, "C_N: N must be >= 1");
    return 2.0 * ball_volume(N - 1);
}

// ---------------------------------------------------------------------------

FieldND::FieldND(int dimension, Kind kind) : n_(dimension), kind_(std::move(kind))
{
    require(n_ >= 2, "FieldND: dimension must be >= 2");
    std::visit(
        [this](auto& k) {
            using K = std::decay_t<decltype(k)>;
            check_vec(k.center, n_, "field center");
            if constexpr (std::is_same_v<K, BallIndicator>) {
                require(std::isfinite(k.radius) && k.radius > 0.0, "ball_indicator: radius must be > 0");
                require_finite(k.height, "ball_indicator height");
            } else if constexpr (std::is_same_v<K, RadialSmooth>) {
                require(k.profile.support().lo >= 0.0, "radial_smooth: profile support must lie in [0, inf)");
            } else {
                check_vec(k.direction, n_, "affine_clamp direction");
                const double len = norm(k.direction);
                require(len > 0.0, "affine_clamp: direction must be nonzero");
                for (double& x : k.direction) x /= len;
                require_finite(k.slope, "affine_clamp slope");
                require(std::isfinite(k.clamp.lo) && std::isfinite(k.clamp.hi) && k.clamp.lo < k.clamp.hi,
                        "affine_clamp: clamp interval must satisfy c0 < c1");
                require(std::isfinite(k.window_radius) && k.window_radius > 0.0,
                        "affine_clamp: window_radius must be > 0");
            }
        },
        kind_);
}

const char* FieldND::kind_name() const noexcept
{
    switch (kind_.index()) {
    case 0: return "ball_indicator";
    case 1: return "radial_smooth";
    default: return "affine_clamp";
    }
}

const VecN& FieldND::center() const noexcept
{
    return std::visit([](const auto& k) -> const VecN& { return k.center; }, kind_);
}

double FieldND::section_radius() const noexcept
{
    if (const auto* b = std::get_if<BallIndicator>(&kind_)) return b->radius;
    if (const auto* r = std::get_if<RadialSmooth>(&kind_)) return r->profile.support().hi;
    return std::get<AffineClamp>(kind_).window_radius;
}

double FieldND::bounding_radius() const noexcept { return norm(center()) + section_radius(); }

VariationTriple FieldND::variation() const
{
    VariationTriple v;
    if (const auto* b = std::get_if<BallIndicator>(&kind_)) {
        v.j = std::abs(b->height) * sphere_area(n_) * std::pow(b->radius, n_ - 1);
    } else if (const auto* r = std::get_if<RadialSmooth>(&kind_)) {
        const CatalogProfile& g = r->profile;
        const int n = n_;
        auto integrand = [&](double rho) { return std::abs(g.slope(rho)) * std::pow(rho, n - 1); };
        const Interval s = g.support();
        double err = 0.0;
        const double I =
            boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, s.lo, s.hi, 15, 1e-13, &err);
        v.a = sphere_area(n_) * I;
    } else {
        const auto& a = std::get<AffineClamp>(kind_);
        const double clamp_length = sphere_area(n_) * ball_volume(n_ - 1) * std::pow(a.window_radius, n_ - 1) /
                                    c_n_constant(n_);
        v.a = std::abs(a.slope) * a.clamp.length() * clamp_length;
    }
    return v;
}

FieldND FieldND::translated(const VecN& d) const
{
    check_vec(d, n_, "translation");
    Kind k = kind_;
    std::visit([&](auto& x) { for (int i = 0; i < n_; ++i) x.center[i] += d[i]; }, k);
    return FieldND(n_, std::move(k));
}

FieldND FieldND::rotated(const std::vector<double>& q) const
{
    require(q.size() == static_cast<std::size_t>(n_ * n_), "rotation must be an N x N matrix");
    auto apply = [&](const VecN& v) {
        VecN out(n_, 0.0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out[i] += q[i * n_ + j] * v[j];
        return out;
    };
    Kind k = kind_;
    std::visit(
        [&](auto& x) {
            x.center = apply(x.center);
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, AffineClamp>) x.direction = apply(x.direction);
        },
        k);
    return FieldND(n_, std::move(k));
}

// ---------------------------------------------------------------------------

SectionLine make_section_line(VecN sigma, VecN z)
{
    require(!sigma.empty() && sigma.size() == z.size(), "section line: sigma and z must have equal dimension");
    require(std::abs(norm(sigma) - 1.0) <= 1e-12, "section line: |sigma| must be 1");
    require(std::abs(dot(sigma, z)) <= 1e-12, "section line: z must lie in sigma-perp");
    return {std::move(sigma), std::move(z)};
}

BVFunction1D extract_section(const FieldND& f, const SectionLine& line)
{
    require(static_cast<int>(line.sigma.size()) == f.dimension(), "section line dimension mismatch");
    const auto [d, t0] = line_offset(line, f.center());

    if (const auto* b = std::get_if<BallIndicator>(&f.kind())) {
        if (d >= b->radius) return {};
        const double hw = std::sqrt((b->radius - d) * (b->radius + d));
        return BVFunction1D({JumpPiece{t0 - hw, b->height}, JumpPiece{t0 + hw, -b->height}});
    }
    if (const auto* r = std::get_if<RadialSmooth>(&f.kind())) {
        if (d >= r->profile.support().hi) return {};
        return BVFunction1D({SmoothPiece(RadialSectionProfile(r->profile, d, t0))});
    }
    const auto& a = std::get<AffineClamp>(f.kind());
    if (d > a.window_radius) return {};
    // (z + sigma t - c) . e = k (t - t0), the foot point lying in the plane through c.
    const double k = dot(line.sigma, a.direction);
    if (std::abs(k) < 1e-12) return {};
    VecN foot(line.z);
    for (std::size_t i = 0; i < foot.size(); ++i) foot[i] += t0 * line.sigma[i] - a.center[i];
    const double p0 = dot(foot, a.direction);
    const double ta = t0 + (a.clamp.lo - p0) / k, tb = t0 + (a.clamp.hi - p0) / k;
    const double rise = a.slope * a.clamp.length() * (k > 0.0 ? 1.0 : -1.0);
    return BVFunction1D({SmoothPiece(CatalogProfile::affine_ramp({std::min(ta, tb), std::max(ta, tb)}, rise))});
}

std::vector<VecN> perp_frame(const VecN& sigma)
{
    const std::size_t n = sigma.size();
    // Use every axis except the one most aligned with sigma (lowest index on ties).
    std::size_t skip = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(sigma[i]) > std::abs(sigma[skip])) skip = i;
    std::vector<VecN> frame;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == skip) continue;
        VecN v(n, 0.0);
        v[i] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            const double s = dot(v, sigma);
            for (std::size_t k = 0; k < n; ++k) v[k] -= s * sigma[k];
            for (const VecN& f : frame) {
                const double p = dot(v, f);
                for (std::size_t k = 0; k < n; ++k) v[k] -= p * f[k];
            }
        }
        const double len = norm(v);
        for (double& x : v) x /= len;
        frame.push_back(std::move(v));
    }
    return frame;
}

// ---------------------------------------------------------------------------

Philox4x32::Philox4x32(std::uint64_t seed) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
{
}

Philox4x32::Block Philox4x32::operator()(Block ctr) const noexcept
{
    constexpr std::uint32_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
    constexpr std::uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0, static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1, static_cast<std::uint32_t>(p0)};
        k0 += W0;
        k1 += W1;
    }
    return ctr;
}

namespace {

/// Stream of uniforms in (0,1) for one sample index.
class UniformStream {
public:
    UniformStream(const Philox4x32& rng, std::uint64_t index) : rng_(rng), index_(index) {}

    double next()
    {
        if (pos_ == 4) refill();
        const std::uint64_t a = block_[pos_] >> 5, b = block_[pos_ + 1] >> 6;
        pos_ += 2;
        return (static_cast<double>(a * 67108864ull + b) + 0.5) * 0x1p-53;
    }

private:
    void refill()
    {
        block_ = rng_({static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32), block_id_++, 0});
        pos_ = 0;
    }

    const Philox4x32& rng_;
    std::uint64_t index_;
    std::uint32_t block_id_ = 0;
    Philox4x32::Block block_{};
    int pos_ = 4;
};

VecN gaussian_vector(UniformStream& u, std::size_t n)
{
    VecN v(n);
    for (std::size_t i = 0; i < n; i += 2) {
        const double r = std::sqrt(-2.0 * std::log(u.next()));
        const double th = 2.0 * std::numbers::pi * u.next();
        v[i] = r * std::cos(th);
        if (i + 1 < n) v[i + 1] = r * std::sin(th);
    }
    return v;
}

VecN unit_vector(UniformStream& u, std::size_t n)
{
    for (;;) {
        VecN v = gaussian_vector(u, n);
        const double len = norm(v);
        if (len > 1e-300) {
            for (double& x : v) x /= len;
            return v;
        }
    }
}

}  // namespace

SectionLine sample_line(const Philox4x32& rng, std::uint64_t index, int N, double R)
{
    require(N >= 2, "sample_line: N must be >= 2");
    UniformStream u(rng, index);
    VecN sigma = unit_vector(u, static_cast<std::size_t>(N));
    const VecN w = unit_vector(u, static_cast<std::size_t>(N - 1));
    const double rho = R * std::pow(u.next(), 1.0 / (N - 1));
    const std::vector<VecN> frame = perp_frame(sigma);
    VecN z(static_cast<std::size_t>(N), 0.0);
    for (int k = 0; k < N - 1; ++k)
        for (int i = 0; i < N; ++i) z[i] += rho * w[k] * frame[k][i];
    return {std::move(sigma), std::move(z)};
}

// ---------------------------------------------------------------------------

namespace {

struct SampleValue {
    double value = 0.0;
    double half_width = 0.0;
    bool failed = false;
    bool missed = false;
};

MCEstimate summarize(const std::vector<SampleValue>& v, double factor, std::uint64_t seed)
{
    MCEstimate e;
    e.samples = v.size();
    e.seed = seed;
    std::vector<double> values, widths;
    for (const auto& s : v) {
        if (s.failed) {
            ++e.failures;
            continue;
        }
        if (s.missed) ++e.tolerance_misses;
        values.push_back(factor * s.value);
        widths.push_back(factor * s.half_width);
    }
    const std::size_t n = values.size();
    e.flagged = static_cast<double>(e.failures) > 1e-3 * static_cast<double>(v.size());
    if (n == 0) {
        e.mean = std::nan("");
        e.std_error = std::nan("");
        return e;
    }
    e.mean = pairwise_sum(values) / static_cast<double>(n);
    e.systematic = pairwise_sum(widths) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
    e.std_error = n > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return e;
}

double mc_factor(int N, double R)
{
    return sphere_area(N) * ball_volume(N - 1) * std::pow(R, N - 1);
}

}  // namespace

MCEstimate F_nd_estimate(const FieldND& f, double gamma, double lambda, std::size_t samples, std::uint64_t seed,
                         double tol_1d, unsigned threads)
{
    require(std::isfinite(gamma) && gamma > 0.0, "gamma must be > 0 (the functionals are studied for gamma > 0)");
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be > 0");
    require(samples >= 1, "samples must be >= 1");
    require(std::isfinite(tol_1d) && tol_1d > 0.0, "tol_1d must be > 0");
    const int N = f.dimension();
    const double R = f.bounding_radius();
    const Philox4x32 rng(seed);
    std::vector<SampleValue> out(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
        try {
            const BVFunction1D sec = extract_section(f, sample_line(rng, i, N, R));
            ExceedanceQuery q;
            q.gamma = gamma;
            q.lambda = lambda;
            q.tol = tol_1d;
            const Evaluation e = F_value(sec, q);
            out[i] = {e.enclosure.midpoint(), 0.5 * e.enclosure.width(), false, !e.tolerance_met};
        } catch (const std::exception&) {
            out[i].failed = true;
        }
    });
    return summarize(out, mc_factor(N, R) / c_n_constant(1), seed);
}

VariationPart variation_part_from_string(const std::string& s)
{
    if (s == "a") return VariationPart::a;
    if (s == "j") return VariationPart::j;
    if (s == "c") return VariationPart::c;
    throw std::invalid_argument("variation part must be one of a, j, c (got '" + s + "')");
}

const char* to_string(VariationPart p) noexcept
{
    switch (p) {
    case VariationPart::a: return "a";
    case VariationPart::j: return "j";
    case VariationPart::c: return "c";
    }
    return "?";
}

MCEstimate sectioning_variation_check(const FieldND& f, VariationPart which, std::size_t samples, std::uint64_t seed,
                                      unsigned threads)
{
    require(samples >= 1, "samples must be >= 1");
    const int N = f.dimension();
    const double R = f.bounding_radius();
    const Philox4x32 rng(seed);
    std::vector<SampleValue> out(samples);
    parallel_for(samples, threads, [&](std::size_t i) {
        const VariationTriple v = extract_section(f, sample_line(rng, i, N, R)).variation();
        out[i].value = which == VariationPart::a ? v.a : which == VariationPart::j ? v.j : v.c;
    });
    return summarize(out, mc_factor(N, R), seed);
}

bool mc_agrees(const MCEstimate& e, double target) noexcept
{
    if (!std::isfinite(e.mean)) return false;
    const double slop = 3.0 * e.std_error + e.systematic + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(target);
    return std::abs(e.mean - target) <= slop;
}

}  // namespace nlbv
