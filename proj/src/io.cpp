#include "pxfb/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pxfb {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("atomic_write: write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string field_csv(const ScalarField& f) {
    const Grid& g = f.grid;
    std::ostringstream out;
    out << (g.dim == 2 ? "x,y,value\n" : "x,value\n");
    const bool node = f.location == Location::Node;
    const int cx = node ? g.nodes(0) : g.cells(0);
    const int cy = node ? g.nodes(1) : g.cells(1);
    for (int ix = 0; ix < cx; ++ix)
        for (int iy = 0; iy < cy; ++iy) {
            const Vec2 x = node ? g.node_coord(ix, iy) : g.cell_center(ix, iy);
            out << format_g17(x[0]);
            if (g.dim == 2) out << ',' << format_g17(x[1]);
            out << ',' << format_g17(node ? f.at_node(ix, iy) : f.at_cell(ix, iy)) << '\n';
        }
    return out.str();
}

ScalarField field_from_csv(const Grid& g, Location loc, const std::string& text) {
    ScalarField f(g, loc);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("field_from_csv: empty file");
    std::size_t idx = 0;
    const std::size_t expect = f.values.size();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto last = line.find_last_of(',');
        if (last == std::string::npos)
            throw std::runtime_error("field_from_csv: malformed row: " + line);
        if (idx >= expect) throw std::runtime_error("field_from_csv: too many rows");
        f.values[idx++] = std::stod(line.substr(last + 1));
    }
    if (idx != expect)
        throw std::runtime_error("field_from_csv: expected " + std::to_string(expect) +
                                 " rows, got " + std::to_string(idx));
    f.check_finite("field_from_csv");
    return f;
}

ScalarField load_field_csv(const Grid& g, Location loc, const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_field_csv: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return field_from_csv(g, loc, ss.str());
}

std::string freeboundary_csv(const FreeBoundary& fb, int dim) {
    std::ostringstream out;
    out << (dim == 2 ? "x,y,nu_x,nu_y,grad_trace,lambda_star\n" : "x,nu,grad_trace,lambda_star\n");
    for (const auto& pt : fb.points) {
        if (dim == 2)
            out << format_g17(pt.x[0]) << ',' << format_g17(pt.x[1]) << ',' << format_g17(pt.nu[0])
                << ',' << format_g17(pt.nu[1]);
        else
            out << format_g17(pt.x[0]) << ',' << format_g17(pt.nu[0]);
        out << ',' << format_g17(pt.grad_trace) << ',' << format_g17(pt.lambda_star) << '\n';
    }
    return out.str();
}

std::string energy_trace_csv(const MinimizerResult& result) {
    std::ostringstream out;
    out << "stage,eps,delta,iterations,energy_smoothed,grad_norm,dirichlet,volume,total\n";
    for (size_t s = 0; s < result.stage_info.size(); ++s) {
        const StageInfo& si = result.stage_info[s];
        const EnergyBreakdown& e = result.energy_trace[s];
        out << (s + 1) << ',' << format_g17(si.eps) << ',' << format_g17(si.delta) << ','
            << si.iterations << ',' << format_g17(si.energy_smoothed) << ','
            << format_g17(si.grad_norm) << ',' << format_g17(e.dirichlet) << ','
            << format_g17(e.volume) << ',' << format_g17(e.total) << '\n';
    }
    return out.str();
}

ordered_json report_json(const VerificationReport& rep) {
    ordered_json j;
    ordered_json meta;
    for (const auto& [k, v] : rep.meta) meta[k] = v;
    j["meta"] = meta;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json jc;
        jc["name"] = c.name;
        jc["paper_ref"] = c.paper_ref;
        ordered_json vals;
        for (const auto& [k, v] : c.values) vals[k] = v;
        jc["values"] = vals;
        if (std::isfinite(c.tolerance))
            jc["tol"] = c.tolerance;
        else
            jc["tol"] = nullptr;
        jc["status"] = c.status;
        jc["notes"] = c.notes;
        checks.push_back(jc);
    }
    j["checks"] = checks;
    return j;
}

std::string report_summary_text(const VerificationReport& rep) {
    std::ostringstream out;
    int pass = 0, fail = 0, skip = 0;
    for (const auto& c : rep.checks) {
        std::string tag = c.status == "pass" ? "PASS" : (c.status == "fail" ? "FAIL" : "SKIP");
        out << tag << "  " << c.name;
        if (!c.values.empty()) {
            out << "  (";
            bool first = true;
            for (const auto& [k, v] : c.values) {
                if (!first) out << ", ";
                first = false;
                char buf[64];
                std::snprintf(buf, sizeof buf, "%s=%.4g", k.c_str(), v);
                out << buf;
            }
            out << ")";
        }
        if (!c.notes.empty()) out << "  -- " << c.notes;
        out << '\n';
        (c.status == "pass" ? pass : (c.status == "fail" ? fail : skip))++;
    }
    out << pass << " passed, " << fail << " failed, " << skip << " skipped\n";
    return out.str();
}

}  // namespace pxfb
