#include "heckelab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace heckelab {

using nlohmann::json;

json region_to_json(const Region& region) {
    json j;
    j["n"] = region.n;
    if (region.n == 2) {
        j["kind"] = "halfplane_fundamental_domain";
        j["y_max"] = region.y_max;
    } else {
        j["kind"] = "iwasawa_box";
        json hb = json::array(), xb = json::array();
        for (const auto& [lo, hi] : region.h_bounds) hb.push_back({lo, hi});
        for (const auto& [lo, hi] : region.x_bounds) xb.push_back({lo, hi});
        j["h_bounds"] = hb;
        j["x_bounds"] = xb;
    }
    return j;
}

json run_config_to_json(const RunConfig& config) {
    json j;
    j["n"] = config.n;
    j["p"] = config.p;
    j["epsilons"] = config.epsilons;
    j["k"] = config.k;
    j["region"] = region_to_json(config.region);
    j["x0"] = config.x0;
    j["samples"] = config.samples;
    j["seed"] = config.seed;
    j["coverage_target"] = config.coverage_target;
    j["cap"] = config.cap;
    // thread count is execution detail, not experiment identity: results are
    // worker-count independent by construction
    j["metric_scale"] = config.metric_scale;
    return j;
}

json coverage_report_to_json(const CoverageReport& report, const RunConfig& config) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = run_config_to_json(config);
    j["n"] = report.n;
    j["p"] = report.p;
    j["k"] = report.k;
    j["epsilon"] = report.epsilon;
    j["region"] = region_to_json(report.region);
    j["samples"] = report.samples;
    j["covered"] = report.covered;
    j["fraction"] = report.fraction;
    j["stderr"] = report.std_error;
    j["seed"] = report.seed;
    return j;
}

json exponent_fit_to_json(const ExponentFit& fit, const RunConfig& config) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["config"] = run_config_to_json(config);
    j["n"] = fit.n;
    j["p"] = fit.p;
    j["x0"] = fit.x0_descriptor;
    json grid = json::array();
    for (const auto& g : fit.grid) {
        json e;
        e["epsilon"] = g.epsilon;
        e["coverage_target"] = g.coverage_target;
        e["k_min"] = g.result.k;
        e["determined"] = g.result.determined;
        e["achieved_fraction"] = g.result.achieved_fraction;
        e["k_last"] = g.result.k_last;
        e["heuristic_k"] = g.result.heuristic_k;
        grid.push_back(e);
    }
    j["grid"] = grid;
    j["kappa_hat"] = fit.kappa_hat;
    j["slope_stderr"] = fit.slope_stderr;
    j["intercept"] = fit.intercept;
    j["normalization"] = fit.normalization;
    return j;
}

std::string exponent_fit_csv(const ExponentFit& fit) {
    std::ostringstream out;
    out << "abscissa,k_min\n";
    char buf[64];
    for (const auto& g : fit.grid) {
        if (!g.result.determined) continue;
        const double t = fit.normalization * std::log(1.0 / g.epsilon) /
                         std::log(static_cast<double>(fit.p));
        std::snprintf(buf, sizeof(buf), "%.12g,%d\n", t, g.result.k);
        out << buf;
    }
    return out.str();
}

std::string orbit_cloud_csv(const OrbitCloud& cloud) {
    std::ostringstream out;
    char buf[128];
    if (cloud.n == 2) {
        out << "x,y\n";
        for (const auto& pt : cloud.points) {
            const HalfPlanePoint z = to_halfplane(pt.point);
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", z.x, z.y);
            out << buf;
        }
    } else {
        out << "gram_row_major\n";
        for (const auto& pt : cloud.points) {
            const auto& Y = pt.point.Y;
            for (int i = 0; i < Y.rows(); ++i)
                for (int j = 0; j < Y.cols(); ++j) {
                    std::snprintf(buf, sizeof(buf), "%.17g", Y(i, j));
                    out << buf << ((i == Y.rows() - 1 && j == Y.cols() - 1) ? "\n" : ",");
                }
        }
    }
    return out.str();
}

json coset_rep_to_json(const CosetRep& rep) {
    json j;
    j["n"] = rep.matrix.dim();
    j["p"] = rep.p;
    j["l"] = rep.l;
    j["matrix"] = rep.matrix.to_decimal_strings();
    j["partition"] = partition_of(rep).parts;
    return j;
}

namespace {

// One token like "0.5+0.25j", "-1.2", ".5j", "1e-3-2e-4j".
std::complex<double> parse_complex_token(const std::string& tok) {
    if (tok.empty()) throw std::invalid_argument("empty complex token");
    const char* s = tok.c_str();
    char* end = nullptr;
    double first = std::strtod(s, &end);
    if (end == s) {
        // allow a bare "j" / "+j" / "-j"
        if (tok == "j") return {0.0, 1.0};
        if (tok == "+j") return {0.0, 1.0};
        if (tok == "-j") return {0.0, -1.0};
        throw std::invalid_argument("malformed complex token: " + tok);
    }
    if (*end == '\0') return {first, 0.0};
    if (*end == 'j') {
        if (*(end + 1) != '\0') throw std::invalid_argument("malformed complex token: " + tok);
        return {0.0, first};
    }
    const char* s2 = end;
    double second;
    if ((*s2 == '+' || *s2 == '-') && *(s2 + 1) == 'j') {
        second = (*s2 == '+') ? 1.0 : -1.0;
        end = const_cast<char*>(s2 + 1);
    } else {
        second = std::strtod(s2, &end);
        if (end == s2) throw std::invalid_argument("malformed complex token: " + tok);
    }
    if (*end != 'j' || *(end + 1) != '\0')
        throw std::invalid_argument("malformed complex token: " + tok);
    return {first, second};
}

}  // namespace

SpectralParam parse_mu(const std::string& text) {
    SpectralParam mu;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        // trim spaces
        size_t b = tok.find_first_not_of(" \t");
        size_t e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw std::invalid_argument("empty component in mu list");
        mu.mu.push_back(parse_complex_token(tok.substr(b, e - b + 1)));
    }
    if (mu.mu.empty()) throw std::invalid_argument("mu list is empty");
    return mu;
}

std::string format_complex(const std::complex<double>& z) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gj", z.real(), z.imag());
    return buf;
}

json complex_to_json(const std::complex<double>& z) {
    json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j;
}

}  // namespace heckelab
