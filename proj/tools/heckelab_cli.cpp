#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "heckelab/json_io.hpp"
#include "heckelab/svg.hpp"

using namespace heckelab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;   // malformed input or resource cap
constexpr int kExitThinFit = 3; // fewer than 3 determined grid points

SymPoint basepoint_from_flags(int n, const std::vector<double>& gram,
                              const std::vector<double>& halfplane) {
    if (!halfplane.empty()) {
        if (n != 2 || halfplane.size() != 2)
            throw std::invalid_argument("--x0-halfplane takes x,y and requires n=2");
        return from_halfplane(halfplane[0], halfplane[1]);
    }
    if (!gram.empty()) {
        if (static_cast<int>(gram.size()) != n * n)
            throw std::invalid_argument("--x0-gram needs n*n row-major entries");
        Eigen::MatrixXd Y(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Y(i, j) = gram[static_cast<size_t>(i * n + j)];
        return make_sym_point(Y);
    }
    return default_basepoint(n);
}

std::vector<double> gram_descriptor(const SymPoint& x) {
    std::vector<double> out;
    for (int i = 0; i < x.dim(); ++i)
        for (int j = 0; j < x.dim(); ++j) out.push_back(x.Y(i, j));
    return out;
}

void write_file_atomically(const fs::path& path, const std::string& content,
                           std::vector<fs::path>& written) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << content;
    }
    fs::rename(tmp, path);
    written.push_back(path);
}

void remove_partial_outputs(const std::vector<fs::path>& written) {
    for (const auto& p : written) {
        std::error_code ec;
        fs::remove(p, ec);
    }
}

struct CommonFlags {
    uint64_t seed = 0;
    int threads = 0;
    uint64_t cap = kDefaultRepCap;
    std::string out_dir = ".";

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--threads", threads,
                        "worker threads (0: HECKE_LAB_THREADS or hardware)");
        cmd->add_option("--cap", cap, "representative-count resource cap");
        cmd->add_option("--out-dir", out_dir, "output directory");
    }
};

int run_hecke_enum(int n, long p, int l, uint64_t cap, bool buckets, const std::string& out_path) {
    if (coset_count(n, p, l) > cap) {
        std::cerr << "error: representative count " << coset_count(n, p, l).get_str()
                  << " exceeds cap " << cap << "\n";
        return kExitInput;
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    if (buckets) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = n;
        j["p"] = p;
        j["l"] = l;
        json arr = json::array();
        mpz_class total = 0;
        for (const auto& [part, size] : partition_buckets(n, p, l, cap)) {
            json e;
            e["partition"] = part.parts;
            e["size"] = size;
            arr.push_back(e);
            total += size;
        }
        j["buckets"] = arr;
        j["total"] = total.get_str();
        *out << j.dump(2) << "\n";
    } else {
        for_each_coset(
            n, p, l, [&](const CosetRep& rep) { *out << coset_rep_to_json(rep).dump() << "\n"; },
            cap);
    }
    return kExitOk;
}

int run_spherical_eval(int n, long p, int l, const std::string& mu_text) {
    SpectralParam mu = parse_mu(mu_text);
    if (mu.dim() != n) throw std::invalid_argument("mu must have exactly n components");
    const auto h = spherical_transform_h(n, p, l, mu);
    const auto lam = hecke_eigenvalue_lambda(n, p, l, mu);
    const auto orc = symmetric_oracle(n, p, l, mu);

    json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = n;
    j["p"] = p;
    j["l"] = l;
    json mu_json = json::array();
    for (const auto& m : mu.mu) mu_json.push_back(format_complex(m));
    j["mu"] = mu_json;
    j["theta"] = theta(mu);
    j["h_tilde"] = complex_to_json(h);
    j["lambda"] = complex_to_json(lam);
    j["oracle"] = complex_to_json(orc);
    j["oracle_delta"] = std::abs(lam - orc);
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_spherical_check(int n, long p, int lmax, double delta, double bound,
                        const std::string& mu_text, uint64_t cap) {
    SpectralParam mu = mu_text.empty() ? SpectralParam{} : sort_to_dominant(parse_mu(mu_text));
    if (mu.dim() == 0)
        for (int i = 0; i < n; ++i) mu.mu.push_back(0.0);  // tempered reference point
    if (mu.dim() != n) throw std::invalid_argument("mu must have exactly n components");

    // One enumeration pass per weight; the per-partition ratio matches
    // spherical_decay_ratio.
    const auto r = rho(n);
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        w[static_cast<size_t>(i)] =
            -(1.0 - delta) * r[static_cast<size_t>(i)] + mu.mu[static_cast<size_t>(i)].real();

    json sweeps = json::array();
    bool all_pass = true;
    for (int l = 0; l <= lmax; ++l) {
        auto buckets = partition_buckets(n, p, l, cap);
        auto layer = spherical_function_layer(n, p, l, mu, cap);
        for (const auto& [part, size] : buckets) {
            const double ratio = std::abs(layer.at(part)) / chi_real(w, part.parts, p);
            json e;
            e["partition"] = part.parts;
            e["double_coset_size"] = size;
            e["ratio"] = ratio;
            e["pass"] = ratio <= bound;
            sweeps.push_back(e);
            all_pass = all_pass && ratio <= bound;
        }
    }
    json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = n;
    j["p"] = p;
    j["delta"] = delta;
    j["bound"] = bound;
    json mu_json = json::array();
    for (const auto& m : mu.mu) mu_json.push_back(format_complex(m));
    j["mu"] = mu_json;
    j["sweep"] = sweeps;
    j["pass"] = all_pass;
    std::cout << j.dump(2) << "\n";
    return all_pass ? kExitOk : kExitInput;
}

int run_cover(const RunConfig& config, const SymPoint& x0, bool svg, bool csv,
              const std::string& out_dir) {
    std::vector<fs::path> written;
    try {
        SamplerConfig scfg;
        scfg.region = config.region;
        scfg.samples = config.samples;
        scfg.seed = config.seed;
        scfg.threads = config.threads;
        scfg.metric_scale = config.metric_scale;
        scfg.cap = config.cap;

        const double eps = config.epsilons.at(0);
        OrbitCloud cloud = orbit_points(x0, config.n, config.p, config.k, config.cap,
                                        config.threads);
        auto xs = sample_region(config.n, config.region, config.samples, config.seed,
                                config.threads);
        CoverageReport report = coverage_on_samples(cloud, xs, eps, scfg);

        const json j = coverage_report_to_json(report, config);
        const fs::path base(out_dir.empty() ? "." : out_dir);
        fs::create_directories(base);
        write_file_atomically(base / "cover_report.json", j.dump(2) + "\n", written);
        if (svg && config.n == 2)
            write_file_atomically(base / "figure.svg",
                                  halfplane_figure_svg(cloud, eps, config.region,
                                                       config.metric_scale),
                                  written);
        if (csv) write_file_atomically(base / "orbit_cloud.csv", orbit_cloud_csv(cloud), written);
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    } catch (const CapExceededError& e) {
        remove_partial_outputs(written);
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

int run_kappa_fit(const RunConfig& config, const SymPoint& x0, const std::string& out_dir) {
    std::vector<fs::path> written;
    SamplerConfig scfg;
    scfg.region = config.region;
    scfg.samples = config.samples;
    scfg.seed = config.seed;
    scfg.threads = config.threads;
    scfg.metric_scale = config.metric_scale;
    scfg.cap = config.cap;

    std::vector<GridPointResult> grid;
    for (double eps : config.epsilons) {
        GridPointResult g;
        g.epsilon = eps;
        g.coverage_target = config.coverage_target;
        g.result = min_k_for_coverage(x0, config.n, config.p, eps, config.coverage_target, scfg);
        grid.push_back(g);
        std::cerr << "epsilon " << eps << ": "
                  << (g.result.determined ? "k_min = " + std::to_string(g.result.k)
                                          : "undetermined (fraction " +
                                                std::to_string(g.result.achieved_fraction) + ")")
                  << "\n";
    }

    ExponentFit fit;
    try {
        fit = fit_kappa(config.n, config.p, grid, gram_descriptor(x0));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitThinFit;
    }

    const fs::path base(out_dir.empty() ? "." : out_dir);
    fs::create_directories(base);
    const json j = exponent_fit_to_json(fit, config);
    write_file_atomically(base / "kappa_fit.json", j.dump(2) + "\n", written);
    write_file_atomically(base / "kappa_fit.csv", exponent_fit_csv(fit), written);

    std::printf("kappa_hat = %.4f (slope stderr %.4f, intercept %.3f) over %zu grid points\n",
                fit.kappa_hat, fit.slope_stderr, fit.intercept, fit.grid.size());
    return kExitOk;
}

int run_kappa_selftest() {
    const std::vector<double> eps{1.0 / 9, 1.0 / 27, 1.0 / 81, 1.0 / 243};
    auto fit = fit_kappa(2, 3, synthetic_grid(1.0, 2, 3, eps));
    std::printf("selftest kappa_hat = %.4f (expected 1.0 +- 0.1)\n", fit.kappa_hat);
    return std::abs(fit.kappa_hat - 1.0) <= 0.1 ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hecke orbit, spherical transform, and covering experiments on H^n"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    // ---- hecke ----
    auto* hecke = app.add_subcommand("hecke", "coset enumeration");
    hecke->require_subcommand(1);
    int he_n = 2, he_l = 1;
    long he_p = 2;
    bool he_buckets_flag = false;
    std::string he_out;
    CommonFlags he_flags;
    auto* he_enum = hecke->add_subcommand("enum", "emit one JSONL record per representative");
    he_enum->add_option("--n", he_n, "dimension")->required();
    he_enum->add_option("--p", he_p, "prime")->required();
    he_enum->add_option("--l", he_l, "determinant valuation")->required();
    he_enum->add_flag("--partition-buckets", he_buckets_flag, "emit per-partition counts instead");
    he_enum->add_option("--out", he_out, "write to file instead of stdout");
    he_flags.attach(he_enum);
    auto* he_buckets = hecke->add_subcommand("buckets", "per-double-coset sizes");
    he_buckets->add_option("--n", he_n, "dimension")->required();
    he_buckets->add_option("--p", he_p, "prime")->required();
    he_buckets->add_option("--l", he_l, "determinant valuation")->required();
    he_buckets->add_option("--out", he_out, "write to file instead of stdout");
    he_flags.attach(he_buckets);

    // ---- spherical ----
    auto* sph = app.add_subcommand("spherical", "transforms and eigenvalues");
    sph->require_subcommand(1);
    int sp_n = 2, sp_l = 1, sp_lmax = 3;
    long sp_p = 3;
    double sp_delta = 0.1, sp_bound = 3.0;
    std::string sp_mu;
    CommonFlags sp_flags;
    auto* sp_eval = sph->add_subcommand("eval", "evaluate transform, eigenvalue, oracle");
    sp_eval->add_option("--n", sp_n, "dimension")->required();
    sp_eval->add_option("--p", sp_p, "prime")->required();
    sp_eval->add_option("--l", sp_l, "determinant valuation")->required();
    sp_eval->add_option("--mu", sp_mu, "comma list of re+imj components")->required();
    sp_flags.attach(sp_eval);
    auto* sp_check = sph->add_subcommand("check", "decay-bound ratio sweep");
    sp_check->add_option("--n", sp_n, "dimension")->required();
    sp_check->add_option("--p", sp_p, "prime")->required();
    sp_check->add_option("--lmax", sp_lmax, "sweep weights 0..lmax");
    sp_check->add_option("--delta", sp_delta, "bound softening delta");
    sp_check->add_option("--bound", sp_bound, "ratio bound");
    sp_check->add_option("--mu", sp_mu, "parameter (default: tempered zero)");
    sp_flags.attach(sp_check);

    // ---- cover ----
    auto* cover = app.add_subcommand("cover", "orbit coverage experiments");
    cover->require_subcommand(1);
    int cv_n = 2, cv_k = 1;
    long cv_p = 3;
    double cv_eps = 1.0 / 27.0, cv_ymax = 2.0, cv_hbox = 0.3, cv_xbox = 0.5, cv_scale = 1.0;
    int64_t cv_samples = 40000;
    bool cv_svg = false, cv_csv = false;
    std::vector<double> cv_x0_gram, cv_x0_hp;
    CommonFlags cv_flags;
    auto* cv_run = cover->add_subcommand("run", "coverage fraction of a sampled region");
    cv_run->add_option("--n", cv_n, "dimension")->required();
    cv_run->add_option("--p", cv_p, "prime")->required();
    cv_run->add_option("--k", cv_k, "height bound")->required();
    cv_run->add_option("--epsilon", cv_eps, "ball radius")->required();
    cv_run->add_option("--samples", cv_samples, "Monte Carlo samples");
    cv_run->add_option("--y-max", cv_ymax, "n=2 region truncation height");
    cv_run->add_option("--h-box", cv_hbox, "n>=3 diagonal box half width");
    cv_run->add_option("--x-box", cv_xbox, "n>=3 unipotent box half width");
    cv_run->add_option("--metric-scale", cv_scale, "distance scale constant");
    cv_run->add_option("--x0-gram", cv_x0_gram, "basepoint Gram, row-major");
    cv_run->add_option("--x0-halfplane", cv_x0_hp, "basepoint x,y (n=2)");
    cv_run->add_flag("--svg", cv_svg, "emit figure.svg (n=2)");
    cv_run->add_flag("--csv", cv_csv, "emit orbit_cloud.csv");
    cv_flags.attach(cv_run);
    auto* cv_fig = cover->add_subcommand("figure1", "half-plane covering preset");
    cv_fig->add_option("--samples", cv_samples, "Monte Carlo samples");
    cv_flags.attach(cv_fig);

    // ---- kappa ----
    auto* kappa = app.add_subcommand("kappa", "Diophantine exponent estimation");
    kappa->require_subcommand(1);
    int ka_n = 2;
    long ka_p = 3;
    std::vector<double> ka_eps;
    double ka_target = 0.9, ka_ymax = 2.0, ka_hbox = 0.3, ka_xbox = 0.5, ka_scale = 1.0;
    int64_t ka_samples = 3000;
    std::string ka_preset;
    std::vector<double> ka_x0_gram, ka_x0_hp;
    CommonFlags ka_flags;
    auto* ka_fit = kappa->add_subcommand("fit", "sweep epsilons, fit the exponent");
    ka_fit->add_option("--preset", ka_preset, "kappa-n2-p3 or kappa-n3-p2");
    ka_fit->add_option("--n", ka_n, "dimension");
    ka_fit->add_option("--p", ka_p, "prime");
    ka_fit->add_option("--eps", ka_eps, "epsilon grid (decreasing)");
    ka_fit->add_option("--target", ka_target, "coverage target in (0,1)");
    ka_fit->add_option("--samples", ka_samples, "Monte Carlo samples per grid point");
    ka_fit->add_option("--y-max", ka_ymax, "n=2 region truncation height");
    ka_fit->add_option("--h-box", ka_hbox, "n>=3 diagonal box half width");
    ka_fit->add_option("--x-box", ka_xbox, "n>=3 unipotent box half width");
    ka_fit->add_option("--metric-scale", ka_scale, "distance scale constant");
    ka_fit->add_option("--x0-gram", ka_x0_gram, "basepoint Gram, row-major");
    ka_fit->add_option("--x0-halfplane", ka_x0_hp, "basepoint x,y (n=2)");
    ka_flags.attach(ka_fit);
    auto* ka_self = kappa->add_subcommand("selftest", "regression self-consistency check");
    ka_flags.attach(ka_self);

    CLI11_PARSE(app, argc, argv);

    try {
        if (he_enum->parsed() || he_buckets->parsed()) {
            return run_hecke_enum(he_n, he_p, he_l, he_flags.cap,
                                  he_buckets->parsed() || he_buckets_flag, he_out);
        }
        if (sp_eval->parsed()) return run_spherical_eval(sp_n, sp_p, sp_l, sp_mu);
        if (sp_check->parsed())
            return run_spherical_check(sp_n, sp_p, sp_lmax, sp_delta, sp_bound, sp_mu,
                                       sp_flags.cap);
        if (cv_run->parsed() || cv_fig->parsed()) {
            RunConfig config;
            if (cv_fig->parsed()) {
                config.n = 2;
                config.p = 3;
                config.k = 3;
                config.epsilons = {std::pow(3.0, -3.0)};
                config.region = Region::halfplane(2.0);
                cv_svg = true;
                cv_x0_gram.clear();
                cv_x0_hp.clear();
            } else {
                config.n = cv_n;
                config.p = cv_p;
                config.k = cv_k;
                config.epsilons = {cv_eps};
                config.region = (cv_n == 2) ? Region::halfplane(cv_ymax)
                                            : Region::box(cv_n, cv_hbox, cv_xbox);
                config.metric_scale = cv_scale;
            }
            config.samples = cv_samples;
            config.seed = cv_flags.seed;
            config.threads = cv_flags.threads;
            config.cap = cv_flags.cap;
            SymPoint x0 = basepoint_from_flags(config.n, cv_x0_gram, cv_x0_hp);
            config.x0 = gram_descriptor(x0);
            return run_cover(config, x0, cv_svg, cv_csv, cv_flags.out_dir);
        }
        if (ka_fit->parsed()) {
            RunConfig config;
            if (ka_preset == "kappa-n2-p3") {
                config.n = 2;
                config.p = 3;
                config.epsilons = {std::pow(3.0, -2.0), std::pow(3.0, -3.0), std::pow(3.0, -4.0)};
                config.samples = 3000;
                config.region = Region::halfplane(2.0);
            } else if (ka_preset == "kappa-n3-p2") {
                config.n = 3;
                config.p = 2;
                config.epsilons = {std::pow(2.0, -1.0), std::pow(2.0, -1.5), std::pow(2.0, -2.0)};
                config.samples = 500;
                config.region = Region::box(3, 0.3, 0.5);
            } else if (ka_preset.empty()) {
                config.n = ka_n;
                config.p = ka_p;
                config.epsilons = ka_eps;
                config.samples = ka_samples;
                config.region = (ka_n == 2) ? Region::halfplane(ka_ymax)
                                            : Region::box(ka_n, ka_hbox, ka_xbox);
                config.metric_scale = ka_scale;
            } else {
                throw std::invalid_argument("unknown preset: " + ka_preset);
            }
            if (config.epsilons.size() < 3)
                throw std::invalid_argument("need at least 3 epsilons (or a preset)");
            config.coverage_target = ka_target;
            config.seed = ka_flags.seed;
            config.threads = ka_flags.threads;
            config.cap = ka_flags.cap;
            SymPoint x0 = basepoint_from_flags(config.n, ka_x0_gram, ka_x0_hp);
            config.x0 = gram_descriptor(x0);
            return run_kappa_fit(config, x0, ka_flags.out_dir);
        }
        if (ka_self->parsed()) return run_kappa_selftest();
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
