#pragma once

// Experiment configuration files (YAML). The grammar is documented in
// README.md; every schema error carries "path:line: message".

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlbv/bvmodel.hpp"
#include "nlbv/sectionnd.hpp"

namespace nlbv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { eval, sweep, verify, section_nd, gadgets };

RunMode run_mode_from_string(const std::string& s);
const char* to_string(RunMode m) noexcept;

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
};

struct SectionSpec {
    std::size_t samples = 10'000;
    double tol_1d = 1e-2;
    std::size_t variation_samples = 10'000;
};

struct GadgetSpec {
    double epsilon = 0.1;
    std::vector<double> deltas;
    std::vector<double> radii;
    double da_mass = 1.0;
    double lambda = 1.0;
    int oracle_n = 2048;
};

struct ExperimentConfig {
    std::string source;
    RunMode mode = RunMode::eval;
    double gamma = 1.0;
    std::optional<double> lambda;
    std::optional<GridSpec> grid;
    std::optional<double> tolerance;
    int max_depth = 40;
    std::size_t max_boxes = 4'000'000;
    double tail_fraction = 0.25;
    double slack = 1e-2;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string function_id = "u";
    std::optional<BVFunction1D> function;
    std::optional<FieldND> field;
    SectionSpec section;
    std::optional<GadgetSpec> gadgets;
    std::string out_dir = ".";
    std::string prefix = "nlbv";
    /// The parsed document as JSON, with command-line overrides applied.
    nlohmann::json echo;
};

/// `mode_override` replaces the file's mode before mode-specific checks run.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              const std::optional<std::string>& mode_override = {});
ExperimentConfig load_config(const std::string& path, const std::optional<std::string>& mode_override = {});

/// Command-line overrides; they are reflected in the echo.
void override_seed(ExperimentConfig& c, std::uint64_t seed);
void override_threads(ExperimentConfig& c, unsigned threads);
void override_out_dir(ExperimentConfig& c, const std::string& dir);

}  // namespace nlbv
