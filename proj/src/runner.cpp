#include "nlbv/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "nlbv/asymptotics.hpp"
#include "nlbv/format.hpp"
#include "nlbv/functional1d.hpp"
#include "nlbv/numeasure.hpp"

namespace nlbv {

using nlohmann::json;

namespace {

json enclosure_json(const Enclosure& e) { return {{"lo", e.lo}, {"hi", e.hi}}; }

json variation_json(const VariationTriple& v) { return {{"a", v.a}, {"j", v.j}, {"c", v.c}}; }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> sbv_or_none(const VariationTriple& v, double gamma, int N)
{
    if (v.c > 0.0) return std::nullopt;
    return sbv_target(v, gamma, N);
}

class Output {
public:
    explicit Output(const ExperimentConfig& c) : dir_(c.out_dir), prefix_(c.prefix)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
    }

    std::ofstream open(const std::string& suffix) const
    {
        const auto path = dir_ / (prefix_ + suffix);
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        return out;
    }

    void write_json(const std::string& suffix, const json& j) const { open(suffix) << j.dump(2) << '\n'; }

    void write_series(const std::string& name, const std::vector<double>& x, const std::vector<double>& y) const
    {
        auto out = open("_" + name + ".dat");
        out << "# lambda " << name << '\n';
        for (std::size_t i = 0; i < x.size(); ++i) out << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
    }

    [[nodiscard]] std::string path(const std::string& suffix) const { return (dir_ / (prefix_ + suffix)).string(); }

private:
    std::filesystem::path dir_;
    std::string prefix_;
};

ExceedanceQuery eval_query(const ExperimentConfig& c, const BVFunction1D& u, double lambda)
{
    ExceedanceQuery q;
    q.gamma = c.gamma;
    q.lambda = lambda;
    q.tol = c.tolerance ? *c.tolerance : default_tolerance(u, c.gamma);
    q.max_depth = c.max_depth;
    q.max_boxes = c.max_boxes;
    return q;
}

/// Closed form for a single jump, when u is one.
std::optional<double> single_jump_F(const BVFunction1D& u, double gamma)
{
    if (u.pieces().size() != 1) return std::nullopt;
    const auto* j = std::get_if<JumpPiece>(&u.pieces()[0]);
    if (!j) return std::nullopt;
    return closed_form_jump_F(std::abs(j->height), gamma);
}

json run_eval(const ExperimentConfig& c, json& timings)
{
    const BVFunction1D& u = *c.function;
    const ExceedanceQuery q = eval_query(c, u, *c.lambda);
    const VariationTriple v = u.variation();
    const auto start = std::chrono::steady_clock::now();
    const Evaluation e = measure_exceedance(u, q);
    timings["evaluation_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json r;
    r["function_id"] = c.function_id;
    r["gamma"] = q.gamma;
    r["lambda"] = q.lambda;
    r["tolerance"] = q.tol;
    r["nu"] = enclosure_json(e.enclosure);
    r["F"] = enclosure_json(scaled(e.enclosure, 2.0 * q.lambda));
    r["tolerance_met"] = e.tolerance_met;
    r["splits"] = e.splits;
    r["variation"] = variation_json(v);
    r["truncation_radius"] = u.is_constant() ? json(nullptr) : json(truncation_radius(u, q));
    r["rhs_liminf"] = liminf_rhs(v, q.gamma, 1);
    r["sbv_target"] = optional_json(sbv_or_none(v, q.gamma, 1));
    const auto cf = single_jump_F(u, q.gamma);
    r["closed_form_F"] = optional_json(cf);
    if (cf) r["pass_closed_form"] = scaled(e.enclosure, 2.0 * q.lambda).contains(*cf);
    return r;
}

json sweep_points_json(const SweepResult& s)
{
    json pts = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        json p{{"lambda", s.lambdas[i]}, {"tolerance_met", s.tolerance_met[i] != 0}};
        if (s.ok(i)) {
            p["F_lo"] = s.enclosures[i].lo;
            p["F_hi"] = s.enclosures[i].hi;
        } else {
            p["error"] = s.errors[i];
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

json run_sweep(const ExperimentConfig& c, const Output& out, bool verify, json& timings)
{
    const BVFunction1D& u = *c.function;
    SweepOptions opt;
    opt.tol = c.tolerance.value_or(0.0);
    opt.max_depth = c.max_depth;
    opt.max_boxes = c.max_boxes;
    opt.threads = c.threads;
    const SweepResult s = lambda_sweep(u, c.gamma, c.grid->min, c.grid->max, c.grid->points, opt, c.function_id);
    timings["point_seconds"] = s.seconds;

    const VariationTriple v = u.variation();
    const double rhs = liminf_rhs(v, c.gamma, 1);
    const auto sbv = sbv_or_none(v, c.gamma, 1);
    const LimitEstimate le = limit_estimate(s, c.tail_fraction);

    {
        auto csv = out.open(".csv");
        write_sweep_csv(csv, s, rhs, sbv);
    }
    std::vector<double> lo, hi, mid;
    for (const auto& e : s.enclosures) {
        lo.push_back(e.lo);
        hi.push_back(e.hi);
        mid.push_back(e.midpoint());
    }
    out.write_series("F_lo", s.lambdas, lo);
    out.write_series("F_hi", s.lambdas, hi);
    out.write_series("F_mid", s.lambdas, mid);
    out.write_series("rhs_liminf", s.lambdas, std::vector<double>(s.size(), rhs));
    if (sbv) out.write_series("sbv_target", s.lambdas, std::vector<double>(s.size(), *sbv));

    json r;
    r["function_id"] = s.function_id;
    r["gamma"] = s.gamma;
    r["tolerance"] = opt.tol > 0.0 ? opt.tol : default_tolerance(u, c.gamma);
    r["variation"] = variation_json(v);
    r["rhs_liminf"] = rhs;
    r["sbv_target"] = optional_json(sbv);
    r["limit_estimate"] = {{"estimate", le.estimate}, {"spread", le.spread}, {"tail_fraction", c.tail_fraction},
                           {"window_begin", le.window_begin}};
    r["points"] = sweep_points_json(s);
    r["csv"] = out.path(".csv");

    if (verify) {
        const TheoremVerdict t = theorem_verdict(s, v, 1, c.tail_fraction, c.slack);
        r["verdict"] = {{"rhs_liminf", t.rhs_liminf},
                        {"rhs_sbv", optional_json(t.rhs_sbv)},
                        {"tail_lo", t.tail_lo},
                        {"tail_hi", t.tail_hi},
                        {"estimate", t.estimate},
                        {"spread", t.spread},
                        {"slack", c.slack},
                        {"lambda_threshold", optional_json(t.lambda_threshold)},
                        {"pass_liminf", t.pass_liminf},
                        {"pass_sbv", t.pass_sbv ? json(*t.pass_sbv) : json(nullptr)}};
    }
    return r;
}

json mc_json(const MCEstimate& e, double target)
{
    return {{"mean", e.mean},         {"stderr", e.std_error},
            {"systematic", e.systematic}, {"samples", e.samples},
            {"seed", e.seed},         {"failures", e.failures},
            {"tolerance_misses", e.tolerance_misses}, {"flagged", e.flagged},
            {"target", target},       {"pass", mc_agrees(e, target) && !e.flagged}};
}

json run_section_nd(const ExperimentConfig& c, json& timings)
{
    const FieldND& f = *c.field;
    const VariationTriple v = f.variation();
    const int N = f.dimension();
    const double target = sbv_target(v, c.gamma, N);

    auto start = std::chrono::steady_clock::now();
    const MCEstimate e = F_nd_estimate(f, c.gamma, *c.lambda, c.section.samples, c.seed, c.section.tol_1d, c.threads);
    timings["F_nd_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json r = mc_json(e, target);
    r["field"] = field_to_json(f);
    r["gamma"] = c.gamma;
    r["lambda"] = *c.lambda;
    r["tol_1d"] = c.section.tol_1d;
    r["variation"] = variation_json(v);

    start = std::chrono::steady_clock::now();
    json checks;
    const double CN = c_n_constant(N);
    for (VariationPart p : {VariationPart::a, VariationPart::j, VariationPart::c}) {
        const MCEstimate m = sectioning_variation_check(f, p, c.section.variation_samples, c.seed, c.threads);
        const double part = p == VariationPart::a ? v.a : p == VariationPart::j ? v.j : v.c;
        checks[to_string(p)] = mc_json(m, CN * part);
    }
    timings["variation_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r["variation_checks"] = checks;
    return r;
}

json oracle_json(double closed, const Enclosure& darboux, const QuadratureValue& section)
{
    const double rel = closed != 0.0 ? std::abs(section.value - closed) / std::abs(closed) : std::abs(section.value);
    return {{"closed_form", closed},
            {"oracle_enclosure", enclosure_json(darboux)},
            {"section_integral", section.value},
            {"section_relative_error", rel},
            {"pass", darboux.contains(closed) && rel <= 1e-8}};
}

json run_gadgets(const ExperimentConfig& c)
{
    const GadgetSpec& g = *c.gadgets;
    const Gamma gamma(c.gamma);
    json r;
    r["gamma"] = c.gamma;
    r["epsilon"] = g.epsilon;
    r["oracle_n"] = g.oracle_n;

    json J = json::array();
    for (double d : g.deltas) {
        const PlaneBox box = make_plane_box({-d, 0.0}, {0.0, d});
        const auto darboux = nu_quadrature_oracle(triangle_region(0.0, d), box, gamma, g.oracle_n);
        const auto sec = nu_section_integral(triangle_sections(0.0, d), {-d, 0.0}, gamma);
        json item = oracle_json(nu_triangle(d, gamma), darboux, sec);
        item["delta"] = d;
        J.push_back(std::move(item));
    }
    json C = json::array();
    for (double rad : g.radii) {
        const PlaneBox box = make_plane_box({-rad, 0.0}, {0.0, rad});
        const auto darboux = nu_quadrature_oracle(curved_region(0.0, rad, gamma), box, gamma, g.oracle_n);
        const auto sec = nu_section_integral(curved_sections(0.0, rad, gamma), curved_x_range(0.0, rad, gamma), gamma);
        json item = oracle_json(nu_curved(rad, gamma), darboux, sec);
        item["r"] = rad;
        C.push_back(std::move(item));
    }
    r["J"] = {{"items", J}, {"total", gadget_J_measure(g.deltas, c.gamma)}};
    r["C"] = {{"items", C}, {"total", gadget_C_measure(g.radii, c.gamma)}};

    // The A-family over a unit stretch of slope da_mass is the slab h < ((1-eps) |u'| / lambda)^(1/g).
    const double A = gadget_A_mass(g.da_mass, g.epsilon, c.gamma, g.lambda);
    json a{{"da_mass", g.da_mass}, {"lambda", g.lambda}, {"closed_form", A}};
    if (g.da_mass > 0.0) {
        const double hmax = std::pow((1.0 - g.epsilon) * g.da_mass / g.lambda, 1.0 / c.gamma);
        const PlaneBox slab = make_plane_box({0.0, 1.0}, {0.0, hmax});
        const auto darboux = nu_quadrature_oracle([](const PlaneBox&) { return BoxVerdict::inside; }, slab, gamma,
                                                  g.oracle_n);
        a["oracle_enclosure"] = enclosure_json(darboux);
        a["pass"] = std::abs(A - darboux.lo) <= 1e-12 * A && std::abs(A - darboux.hi) <= 1e-12 * A;
    } else {
        a["pass"] = A == 0.0;
    }
    r["A"] = a;
    return r;
}

/// True iff every "pass*" member anywhere in j is true.
bool all_pass(const json& j, bool& any)
{
    bool ok = true;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (k.rfind("pass", 0) == 0 && v.is_boolean()) {
                any = true;
                ok = ok && v.get<bool>();
            } else {
                ok = all_pass(v, any) && ok;
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) ok = all_pass(v, any) && ok;
    }
    return ok;
}

}  // namespace

json field_to_json(const FieldND& f)
{
    json j{{"kind", f.kind_name()}, {"dimension", f.dimension()}, {"center", f.center()}};
    if (const auto* b = std::get_if<BallIndicator>(&f.kind())) {
        j["radius"] = b->radius;
        j["height"] = b->height;
    } else if (const auto* r = std::get_if<RadialSmooth>(&f.kind())) {
        const CatalogProfile& p = r->profile;
        json pj{{"profile", to_string(p.family())}, {"support", {p.support().lo, p.support().hi}}};
        if (p.family() == ProfileFamily::polynomial)
            pj["coefficients"] = p.coefficients();
        else
            pj["rise"] = p.rise();
        j["profile"] = pj;
    } else {
        const auto& a = std::get<AffineClamp>(f.kind());
        j["direction"] = a.direction;
        j["slope"] = a.slope;
        j["clamp"] = {a.clamp.lo, a.clamp.hi};
        j["window_radius"] = a.window_radius;
    }
    return j;
}

int run_experiment(const ExperimentConfig& c, std::ostream& log)
{
    const Output out(c);
    const auto start = std::chrono::steady_clock::now();
    json timings = json::object();
    json results;
    switch (c.mode) {
    case RunMode::eval: results = run_eval(c, timings); break;
    case RunMode::sweep: results = run_sweep(c, out, false, timings); break;
    case RunMode::verify: results = run_sweep(c, out, true, timings); break;
    case RunMode::section_nd: results = run_section_nd(c, timings); break;
    case RunMode::gadgets: results = run_gadgets(c); break;
    }
    timings["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool any = false;
    const bool ok = all_pass(results, any);

    json report;
    report["version"] = NLBV_VERSION;
    report["mode"] = to_string(c.mode);
    report["source"] = c.source;
    report["seed"] = c.seed;
    report["threads"] = c.threads;
    report["config"] = c.echo;
    report["results"] = results;
    report["timings"] = timings;
    out.write_json(".json", report);
    out.write_json(".config.json", c.echo);

    log << to_string(c.mode) << ": report " << out.path(".json");
    if (any) log << (ok ? " (all checks pass)" : " (verification FAILED)");
    log << '\n';
    return ok ? exit_ok : exit_verification_failed;
}

}  // namespace nlbv
