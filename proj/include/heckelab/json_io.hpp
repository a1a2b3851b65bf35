#pragma once

#include <string>

#include "heckelab/covering.hpp"
#include "heckelab/exponent.hpp"
#include "heckelab/spherical.hpp"

#include <json.hpp>

namespace heckelab {

inline constexpr int kSchemaVersion = 1;

// Resolved run parameters, embedded in every JSON output for provenance.
struct RunConfig {
    int n = 2;
    long p = 3;
    std::vector<double> epsilons;
    int k = 0;
    Region region = Region::halfplane(2.0);
    std::vector<double> x0;  // row-major Gram entries of the basepoint
    int64_t samples = 1000;
    uint64_t seed = 0;
    double coverage_target = 0.9;
    uint64_t cap = kDefaultRepCap;
    int threads = 0;
    double metric_scale = 1.0;
};

nlohmann::json region_to_json(const Region& region);
nlohmann::json run_config_to_json(const RunConfig& config);

nlohmann::json coverage_report_to_json(const CoverageReport& report, const RunConfig& config);
nlohmann::json exponent_fit_to_json(const ExponentFit& fit, const RunConfig& config);

// Two columns: abscissa (n+2)/(2n)*log_p(1/eps), ordinate k_min.
std::string exponent_fit_csv(const ExponentFit& fit);

// One reduced orbit point per row.
std::string orbit_cloud_csv(const OrbitCloud& cloud);

// JSONL record for one coset representative.
nlohmann::json coset_rep_to_json(const CosetRep& rep);

// "re+imj" list parsing and formatting for the CLI surface.
SpectralParam parse_mu(const std::string& text);
std::string format_complex(const std::complex<double>& z);
nlohmann::json complex_to_json(const std::complex<double>& z);

}  // namespace heckelab
