#include "pxfb/config.hpp"

#include <fstream>
#include <sstream>

namespace pxfb {

namespace {

FieldSpec parse_field_spec(const ordered_json& j, const std::string& who) {
    if (!j.is_object() || !j.contains("type"))
        throw ConfigError(who + ": field spec must be an object with a \"type\"");
    FieldSpec s;
    s.type = j.at("type").get<std::string>();
    if (s.type == "constant") {
        if (!j.contains("value")) throw ConfigError(who + ": constant spec needs \"value\"");
        s.value = j.at("value").get<double>();
    } else if (s.type == "affine") {
        if (!j.contains("a") || !j.contains("b"))
            throw ConfigError(who + ": affine spec needs \"a\" and \"b\"");
        const auto a = j.at("a");
        if (!a.is_array() || a.empty() || a.size() > 2)
            throw ConfigError(who + ": affine \"a\" must have 1 or 2 entries");
        for (size_t i = 0; i < a.size(); ++i) s.a[i] = a[i].get<double>();
        s.b = j.at("b").get<double>();
    } else if (s.type == "table") {
        if (!j.contains("path")) throw ConfigError(who + ": table spec needs \"path\"");
        s.path = j.at("path").get<std::string>();
    } else if (s.type == "edge") {
        if (!j.contains("edge") || !j.contains("value"))
            throw ConfigError(who + ": edge spec needs \"edge\" and \"value\"");
        s.edge = j.at("edge").get<std::string>();
        s.value = j.at("value").get<double>();
        if (s.edge != "xmin" && s.edge != "xmax" && s.edge != "ymin" && s.edge != "ymax")
            throw ConfigError(who + ": edge must be one of xmin/xmax/ymin/ymax");
    } else {
        throw ConfigError(who + ": unknown field spec type \"" + s.type + "\"");
    }
    return s;
}

ordered_json field_spec_json(const FieldSpec& s) {
    ordered_json j;
    j["type"] = s.type;
    if (s.type == "constant") j["value"] = s.value;
    if (s.type == "affine") {
        j["a"] = {s.a[0], s.a[1]};
        j["b"] = s.b;
    }
    if (s.type == "table") j["path"] = s.path;
    if (s.type == "edge") {
        j["edge"] = s.edge;
        j["value"] = s.value;
    }
    return j;
}

}  // namespace

std::string FieldSpec::describe() const {
    std::ostringstream out;
    if (type == "constant") out << "constant " << value;
    if (type == "affine") out << "affine a=(" << a[0] << "," << a[1] << ") b=" << b;
    if (type == "table") out << "table " << path;
    if (type == "edge") out << "edge " << edge << " value " << value;
    return out.str();
}

Config Config::parse(const ordered_json& j) {
    Config c;
    try {
        if (!j.contains("domain")) throw ConfigError("config: missing \"domain\"");
        const auto& d = j.at("domain");
        c.dim = d.at("dim").get<int>();
        if (c.dim != 1 && c.dim != 2)
            throw ConfigError("config: domain.dim must be 1 or 2");
        const auto& ext = d.at("extent");
        if (!ext.is_array() || int(ext.size()) != c.dim)
            throw ConfigError("config: domain.extent needs one [a,b] pair per axis");
        for (int ax = 0; ax < c.dim; ++ax) {
            c.lo[ax] = ext[ax][0].get<double>();
            c.hi[ax] = ext[ax][1].get<double>();
        }
        const auto& nn = d.at("n");
        if (!nn.is_array() || int(nn.size()) != c.dim)
            throw ConfigError("config: domain.n needs one entry per axis");
        for (int ax = 0; ax < c.dim; ++ax) c.n[ax] = nn[ax].get<int>();

        if (j.contains("p")) c.p_spec = parse_field_spec(j.at("p"), "p");
        if (j.contains("lambda")) c.lambda_spec = parse_field_spec(j.at("lambda"), "lambda");
        if (j.contains("phi0")) c.phi0_spec = parse_field_spec(j.at("phi0"), "phi0");
        if (j.contains("schedule")) {
            const auto& s = j.at("schedule");
            if (s.contains("eps")) c.eps_list = s.at("eps").get<std::vector<double>>();
            if (s.contains("delta")) c.delta_list = s.at("delta").get<std::vector<double>>();
            if (s.contains("inner_tol")) c.inner_tol = s.at("inner_tol").get<double>();
            if (s.contains("max_inner_iters"))
                c.max_inner_iters = s.at("max_inner_iters").get<int>();
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tau_factor")) c.tau_factor = j.at("tau_factor").get<double>();
        if (j.contains("gamma0")) c.gamma0 = j.at("gamma0").get<double>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const ordered_json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const ordered_json::exception& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    return parse(j);
}

ordered_json Config::normalized() const {
    ordered_json j;
    ordered_json d;
    d["dim"] = dim;
    ordered_json ext = ordered_json::array();
    for (int ax = 0; ax < dim; ++ax) ext.push_back({lo[ax], hi[ax]});
    d["extent"] = ext;
    ordered_json nn = ordered_json::array();
    for (int ax = 0; ax < dim; ++ax) nn.push_back(n[ax]);
    d["n"] = nn;
    j["domain"] = d;
    j["p"] = field_spec_json(p_spec);
    j["lambda"] = field_spec_json(lambda_spec);
    j["phi0"] = field_spec_json(phi0_spec);
    ordered_json s;
    if (eps_list) s["eps"] = *eps_list;
    if (delta_list) s["delta"] = *delta_list;
    s["inner_tol"] = inner_tol;
    s["max_inner_iters"] = max_inner_iters;
    j["schedule"] = s;
    j["seed"] = seed;
    j["tau_factor"] = tau_factor;
    j["gamma0"] = gamma0;
    j["output_dir"] = output_dir;
    return j;
}

Instance Config::instance(const std::filesystem::path& base_dir) const {
    const Grid grid = Grid::make(dim, lo, hi, n);

    auto eval_spec = [&](const FieldSpec& s, Location loc) -> ScalarField {
        if (s.type == "constant")
            return ScalarField(grid, loc, s.value);
        if (s.type == "affine")
            return sample_field(grid, loc,
                                [&](Vec2 x) { return s.a[0] * x[0] + s.a[1] * x[1] + s.b; });
        if (s.type == "edge") {
            ScalarField f(grid, Location::Node, 0.0);
            const Grid& g = grid;
            for (int ix = 0; ix < g.nodes(0); ++ix)
                for (int iy = 0; iy < g.nodes(1); ++iy) {
                    const bool on = (s.edge == "xmin" && ix == 0) ||
                                    (s.edge == "xmax" && ix == g.n[0]) ||
                                    (s.edge == "ymin" && g.dim == 2 && iy == 0) ||
                                    (s.edge == "ymax" && g.dim == 2 && iy == g.n[1]);
                    if (on) f.at_node(ix, iy) = s.value;
                }
            if (loc != Location::Node)
                throw ConfigError("config: edge specs are only valid for phi0");
            return f;
        }
        // table
        return load_field_csv(grid, loc, base_dir / s.path);
    };

    try {
        ExponentField p(eval_spec(p_spec, Location::Cell));
        CoefficientField lam(eval_spec(lambda_spec, Location::Cell));
        BoundaryData phi0(eval_spec(phi0_spec, Location::Node));

        ContinuationSchedule sched = ContinuationSchedule::defaults(grid, p, lam, phi0);
        if (eps_list) sched.eps_list = *eps_list;
        if (delta_list) sched.delta_list = *delta_list;
        sched.inner_tol = inner_tol;
        sched.max_inner_iters = max_inner_iters;
        sched.validate(grid);

        Instance inst{grid,       std::move(p), std::move(lam), std::move(phi0),
                      sched,      seed,         tau_factor,     gamma0,
                      p_spec.describe(), lambda_spec.describe(), phi0_spec.describe(), false};
        return inst;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace pxfb
