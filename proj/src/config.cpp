#include "nlbv/config.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace nlbv {

RunMode run_mode_from_string(const std::string& s)
{
    if (s == "eval") return RunMode::eval;
    if (s == "sweep") return RunMode::sweep;
    if (s == "verify") return RunMode::verify;
    if (s == "section-nd") return RunMode::section_nd;
    if (s == "gadgets") return RunMode::gadgets;
    throw std::invalid_argument("unknown mode '" + s + "' (expected eval, sweep, verify, section-nd or gadgets)");
}

const char* to_string(RunMode m) noexcept
{
    switch (m) {
    case RunMode::eval: return "eval";
    case RunMode::sweep: return "sweep";
    case RunMode::verify: return "verify";
    case RunMode::section_nd: return "section-nd";
    case RunMode::gadgets: return "gadgets";
    }
    return "?";
}

namespace {

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const
    {
        const int line = at.IsDefined() ? at.Mark().line : -1;
        std::ostringstream os;
        os << source_ << ':' << (line >= 0 ? line + 1 : 1) << ": " << msg;
        throw ConfigError(os.str());
    }

    void expect_map(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsMap()) fail(n, what + " must be a mapping");
    }

    YAML::Node need(const YAML::Node& parent, const char* key, const std::string& where) const
    {
        const YAML::Node n = parent[key];
        if (!n) fail(parent, where + ": missing required key '" + key + "'");
        return n;
    }

    double number(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar()) fail(n, what + " must be a number");
        try {
            return n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, what + " must be a number (got '" + n.Scalar() + "')");
        }
    }

    double finite(const YAML::Node& n, const std::string& what) const
    {
        const double v = number(n, what);
        if (!std::isfinite(v)) fail(n, what + " must be finite");
        return v;
    }

    double positive(const YAML::Node& n, const std::string& what) const
    {
        const double v = finite(n, what);
        if (!(v > 0.0)) fail(n, what + " must be > 0");
        return v;
    }

    long long integer(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar()) fail(n, what + " must be an integer");
        try {
            return n.as<long long>();
        } catch (const YAML::Exception&) {
            fail(n, what + " must be an integer (got '" + n.Scalar() + "')");
        }
    }

    std::uint64_t unsigned_integer(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar()) fail(n, what + " must be a non-negative integer");
        try {
            return n.as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            fail(n, what + " must be a non-negative integer (got '" + n.Scalar() + "')");
        }
    }

    std::string text(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsScalar()) fail(n, what + " must be a string");
        return n.Scalar();
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& what) const
    {
        if (!n.IsSequence()) fail(n, what + " must be a list of numbers");
        std::vector<double> v;
        for (const auto& e : n) v.push_back(finite(e, what + " entry"));
        return v;
    }

    Interval interval(const YAML::Node& n, const std::string& what) const
    {
        const auto v = numbers(n, what);
        if (v.size() != 2) fail(n, what + " must be [lo, hi]");
        if (!(v[0] < v[1])) fail(n, what + " must satisfy lo < hi");
        return {v[0], v[1]};
    }

    /// Converts library precondition failures into located config errors.
    template <class F>
    auto located(const YAML::Node& at, F&& f) const
    {
        try {
            return f();
        } catch (const std::invalid_argument& e) {
            fail(at, e.what());
        }
    }

private:
    std::string source_;
};

CatalogProfile parse_profile(const Reader& r, const YAML::Node& n, const std::string& where)
{
    const std::string fam = r.text(r.need(n, "profile", where), where + ".profile");
    const Interval support = r.interval(r.need(n, "support", where), where + ".support");
    return r.located(n, [&] {
        const ProfileFamily family = profile_family_from_string(fam);
        if (family == ProfileFamily::polynomial)
            return CatalogProfile::polynomial(support,
                                              r.numbers(r.need(n, "coefficients", where), where + ".coefficients"));
        const double rise = r.finite(r.need(n, "rise", where), where + ".rise");
        switch (family) {
        case ProfileFamily::affine_ramp: return CatalogProfile::affine_ramp(support, rise);
        case ProfileFamily::smoothstep: return CatalogProfile::smoothstep(support, rise);
        default: return CatalogProfile::sine_ramp(support, rise);
        }
    });
}

Piece parse_piece(const Reader& r, const YAML::Node& n, const std::string& where)
{
    r.expect_map(n, where);
    const std::string kind = r.text(r.need(n, "kind", where), where + ".kind");
    if (kind == "jump") {
        const double loc = r.finite(r.need(n, "location", where), where + ".location");
        const double h = r.finite(r.need(n, "height", where), where + ".height");
        if (h == 0.0) r.fail(n["height"], where + ".height must be nonzero");
        return JumpPiece{loc, h};
    }
    if (kind == "smooth") return SmoothPiece(parse_profile(r, n, where));
    if (kind == "cantor") {
        const Interval support = r.interval(r.need(n, "support", where), where + ".support");
        const double rise = r.finite(r.need(n, "rise", where), where + ".rise");
        if (rise == 0.0) r.fail(n["rise"], where + ".rise must be nonzero");
        if (const auto o = n["orientation"]) {
            const long long orient = r.integer(o, where + ".orientation");
            if (orient != 1 && orient != -1) r.fail(o, where + ".orientation must be +1 or -1");
            if ((orient > 0) != (rise > 0.0)) r.fail(o, where + ".orientation must match the sign of rise");
        }
        return CantorPiece{support, rise};
    }
    r.fail(n["kind"], where + ".kind must be jump, smooth or cantor (got '" + kind + "')");
}

BVFunction1D parse_function(const Reader& r, const YAML::Node& n, std::string& id)
{
    r.expect_map(n, "function");
    if (const auto i = n["id"]) id = r.text(i, "function.id");
    const double base = n["base"] ? r.finite(n["base"], "function.base") : 0.0;
    std::vector<Piece> pieces;
    if (const auto ps = n["pieces"]) {
        if (!ps.IsSequence()) r.fail(ps, "function.pieces must be a list");
        for (std::size_t i = 0; i < ps.size(); ++i)
            pieces.push_back(parse_piece(r, ps[i], "function.pieces[" + std::to_string(i) + "]"));
    }
    return r.located(n, [&] { return BVFunction1D(std::move(pieces), base); });
}

FieldND parse_field(const Reader& r, const YAML::Node& n)
{
    r.expect_map(n, "field");
    const std::string kind = r.text(r.need(n, "kind", "field"), "field.kind");
    const long long dim = r.integer(r.need(n, "dimension", "field"), "field.dimension");
    if (dim < 2 || dim > 16) r.fail(n["dimension"], "field.dimension must lie in [2, 16]");
    const int N = static_cast<int>(dim);
    VecN center(static_cast<std::size_t>(N), 0.0);
    if (const auto c = n["center"]) {
        center = r.numbers(c, "field.center");
        if (static_cast<int>(center.size()) != N)
            r.fail(c, "field.center must have field.dimension entries");
    }
    FieldND::Kind k;
    if (kind == "ball_indicator") {
        const double radius = r.positive(r.need(n, "radius", "field"), "field.radius");
        const double height = n["height"] ? r.finite(n["height"], "field.height") : 1.0;
        k = BallIndicator{center, radius, height};
    } else if (kind == "radial_smooth") {
        const YAML::Node p = r.need(n, "profile", "field");
        r.expect_map(p, "field.profile");
        k = RadialSmooth{center, parse_profile(r, p, "field.profile")};
    } else if (kind == "affine_clamp") {
        AffineClamp a;
        a.center = center;
        a.direction = r.numbers(r.need(n, "direction", "field"), "field.direction");
        if (static_cast<int>(a.direction.size()) != N) r.fail(n["direction"], "field.direction must have field.dimension entries");
        a.slope = r.finite(r.need(n, "slope", "field"), "field.slope");
        a.clamp = r.interval(r.need(n, "clamp", "field"), "field.clamp");
        a.window_radius = r.positive(r.need(n, "window_radius", "field"), "field.window_radius");
        k = a;
    } else {
        r.fail(n["kind"], "field.kind must be ball_indicator, radial_smooth or affine_clamp (got '" + kind + "')");
    }
    return r.located(n, [&] { return FieldND(N, std::move(k)); });
}

nlohmann::json to_json(const YAML::Node& n)
{
    switch (n.Type()) {
    case YAML::NodeType::Map: {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& kv : n) j[kv.first.Scalar()] = to_json(kv.second);
        return j;
    }
    case YAML::NodeType::Sequence: {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : n) j.push_back(to_json(e));
        return j;
    }
    case YAML::NodeType::Scalar: {
        const std::string& s = n.Scalar();
        if (n.Tag() == "!") return s;  // explicitly quoted
        long long i = 0;
        if (YAML::convert<long long>::decode(n, i)) return i;
        double d = 0.0;
        if (YAML::convert<double>::decode(n, d) && std::isfinite(d)) return d;
        bool b = false;
        if (YAML::convert<bool>::decode(n, b)) return b;
        return s;
    }
    default: return nullptr;
    }
}

const char* const kTopLevelKeys[] = {"mode",       "gamma",     "lambda",  "grid",    "tolerance",
                                     "max_depth",  "max_boxes", "tail_fraction", "slack", "seed",
                                     "threads",    "function",  "field",   "section", "gadgets",
                                     "output"};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source,
                              const std::optional<std::string>& mode_override)
{
    const Reader r(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << source << ':' << e.mark.line + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root.IsMap()) {
        std::ostringstream os;
        os << source << ":1: config must be a mapping";
        throw ConfigError(os.str());
    }
    for (const auto& kv : root) {
        const std::string key = kv.first.Scalar();
        if (std::find(std::begin(kTopLevelKeys), std::end(kTopLevelKeys), key) == std::end(kTopLevelKeys))
            r.fail(kv.first, "unknown key '" + key + "'");
    }

    ExperimentConfig c;
    c.source = source;
    c.echo = to_json(root);

    if (mode_override) {
        try {
            c.mode = run_mode_from_string(*mode_override);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("--mode: ") + e.what());
        }
        c.echo["mode"] = *mode_override;
    } else {
        const YAML::Node mode = r.need(root, "mode", "config");
        c.mode = r.located(mode, [&] { return run_mode_from_string(r.text(mode, "mode")); });
    }

    if (const auto g = root["gamma"]) {
        c.gamma = r.finite(g, "gamma");
        if (!(c.gamma > 0.0)) r.fail(g, "gamma must be > 0 (the functionals are studied for gamma > 0 only)");
    }
    if (const auto l = root["lambda"]) c.lambda = r.positive(l, "lambda");
    if (const auto g = root["grid"]) {
        r.expect_map(g, "grid");
        GridSpec s;
        s.min = r.positive(r.need(g, "min", "grid"), "grid.min");
        s.max = r.positive(r.need(g, "max", "grid"), "grid.max");
        const long long pts = r.integer(r.need(g, "points", "grid"), "grid.points");
        if (!(s.min < s.max)) r.fail(g, "grid must be increasing (min < max)");
        if (pts < 2 || pts > 100000) r.fail(g["points"], "grid.points must lie in [2, 100000]");
        s.points = static_cast<int>(pts);
        c.grid = s;
    }
    if (const auto t = root["tolerance"]) c.tolerance = r.positive(t, "tolerance");
    if (const auto d = root["max_depth"]) {
        const long long v = r.integer(d, "max_depth");
        if (v < 1 || v > 200) r.fail(d, "max_depth must lie in [1, 200]");
        c.max_depth = static_cast<int>(v);
    }
    if (const auto b = root["max_boxes"]) {
        const std::uint64_t v = r.unsigned_integer(b, "max_boxes");
        if (v == 0) r.fail(b, "max_boxes must be positive");
        c.max_boxes = v;
    }
    if (const auto t = root["tail_fraction"]) {
        c.tail_fraction = r.finite(t, "tail_fraction");
        if (!(c.tail_fraction > 0.0 && c.tail_fraction < 1.0)) r.fail(t, "tail_fraction must lie in (0,1)");
    }
    if (const auto s = root["slack"]) {
        c.slack = r.finite(s, "slack");
        if (c.slack < 0.0) r.fail(s, "slack must be >= 0");
    }
    if (const auto s = root["seed"]) c.seed = r.unsigned_integer(s, "seed");
    if (const auto t = root["threads"]) {
        const long long v = r.integer(t, "threads");
        if (v < 1 || v > 1024) r.fail(t, "threads must lie in [1, 1024]");
        c.threads = static_cast<unsigned>(v);
    }
    if (const auto f = root["function"]) c.function = parse_function(r, f, c.function_id);
    if (const auto f = root["field"]) c.field = parse_field(r, f);
    if (const auto s = root["section"]) {
        r.expect_map(s, "section");
        if (const auto v = s["samples"]) {
            c.section.samples = r.unsigned_integer(v, "section.samples");
            if (c.section.samples < 2) r.fail(v, "section.samples must be >= 2");
        }
        if (const auto v = s["tol_1d"]) c.section.tol_1d = r.positive(v, "section.tol_1d");
        if (const auto v = s["variation_samples"]) {
            c.section.variation_samples = r.unsigned_integer(v, "section.variation_samples");
            if (c.section.variation_samples < 2) r.fail(v, "section.variation_samples must be >= 2");
        }
    }
    if (const auto g = root["gadgets"]) {
        r.expect_map(g, "gadgets");
        GadgetSpec s;
        if (const auto v = g["epsilon"]) {
            s.epsilon = r.finite(v, "gadgets.epsilon");
            if (!(s.epsilon >= 0.0 && s.epsilon < 1.0)) r.fail(v, "gadgets.epsilon must lie in [0,1)");
        }
        if (const auto v = g["deltas"]) s.deltas = r.numbers(v, "gadgets.deltas");
        if (const auto v = g["radii"]) s.radii = r.numbers(v, "gadgets.radii");
        for (double d : s.deltas)
            if (!(d > 0.0)) r.fail(g["deltas"], "gadgets.deltas must be positive");
        for (double d : s.radii)
            if (!(d > 0.0)) r.fail(g["radii"], "gadgets.radii must be positive");
        if (const auto v = g["da_mass"]) {
            s.da_mass = r.finite(v, "gadgets.da_mass");
            if (s.da_mass < 0.0) r.fail(v, "gadgets.da_mass must be >= 0");
        }
        if (const auto v = g["lambda"]) s.lambda = r.positive(v, "gadgets.lambda");
        if (const auto v = g["oracle_n"]) {
            const long long n = r.integer(v, "gadgets.oracle_n");
            if (n < 2 || n > (1 << 16)) r.fail(v, "gadgets.oracle_n must lie in [2, 65536]");
            s.oracle_n = static_cast<int>(n);
        }
        c.gadgets = s;
    }
    if (const auto o = root["output"]) {
        r.expect_map(o, "output");
        if (const auto d = o["dir"]) c.out_dir = r.text(d, "output.dir");
        if (const auto p = o["prefix"]) c.prefix = r.text(p, "output.prefix");
    }

    // Mode-specific requirements.
    switch (c.mode) {
    case RunMode::eval:
        if (!c.function) r.fail(root, "mode eval requires 'function'");
        if (!c.lambda) r.fail(root, "mode eval requires 'lambda'");
        break;
    case RunMode::sweep:
    case RunMode::verify:
        if (!c.function) r.fail(root, std::string("mode ") + to_string(c.mode) + " requires 'function'");
        if (!c.grid) r.fail(root, std::string("mode ") + to_string(c.mode) + " requires 'grid'");
        if (c.grid->points < 4) r.fail(root["grid"], "grid.points must be >= 4 for limit estimation");
        break;
    case RunMode::section_nd:
        if (!c.field) r.fail(root, "mode section-nd requires 'field'");
        if (!c.lambda) r.fail(root, "mode section-nd requires 'lambda'");
        break;
    case RunMode::gadgets:
        if (!c.gadgets) r.fail(root, "mode gadgets requires 'gadgets'");
        break;
    }
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::optional<std::string>& mode_override)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ":1: cannot read config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, mode_override);
}

void override_seed(ExperimentConfig& c, std::uint64_t seed)
{
    c.seed = seed;
    c.echo["seed"] = seed;
}

void override_threads(ExperimentConfig& c, unsigned threads)
{
    if (threads < 1) throw ConfigError("--threads must be >= 1");
    c.threads = threads;
    c.echo["threads"] = threads;
}

void override_out_dir(ExperimentConfig& c, const std::string& dir)
{
    c.out_dir = dir;
    c.echo["output"]["dir"] = dir;
}

}  // namespace nlbv
