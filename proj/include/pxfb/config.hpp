// JSON run configuration: domain, field specs (constant / affine / table /
// edge), schedule overrides, seed, output directory. Parsing normalizes into a
// canonical echo so configs round-trip byte-identically.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pxfb/io.hpp"
#include "pxfb/verify.hpp"

namespace pxfb {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FieldSpec {
    std::string type;  // "constant" | "affine" | "table" | "edge"
    double value = 0.0;
    std::array<double, 2> a{0.0, 0.0};
    double b = 0.0;
    std::string path;
    std::string edge;  // "xmin" | "xmax" | "ymin" | "ymax"

    std::string describe() const;
};

struct Config {
    int dim = 1;
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 1.0};
    std::array<int, 2> n{64, 64};
    FieldSpec p_spec{"constant", 2.0, {0, 0}, 0.0, "", ""};
    FieldSpec lambda_spec{"constant", 0.5, {0, 0}, 0.0, "", ""};
    FieldSpec phi0_spec{"constant", 1.0, {0, 0}, 0.0, "", ""};
    std::optional<std::vector<double>> eps_list;
    std::optional<std::vector<double>> delta_list;
    double inner_tol = 1e-6;
    int max_inner_iters = 20000;
    std::uint64_t seed = 1;
    double tau_factor = 1.0;
    double gamma0 = 0.9;
    std::string output_dir = "out";

    static Config parse(const ordered_json& j);
    static Config load(const std::filesystem::path& path);
    ordered_json normalized() const;

    // Builds the instance; table paths resolve relative to base_dir.
    Instance instance(const std::filesystem::path& base_dir) const;
};

}  // namespace pxfb
