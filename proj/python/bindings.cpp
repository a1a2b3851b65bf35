#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heckelab/covering.hpp"
#include "heckelab/exponent.hpp"
#include "heckelab/json_io.hpp"
#include "heckelab/spherical.hpp"
#include "heckelab/svg.hpp"

namespace py = pybind11;
using namespace heckelab;

namespace {

IntMatrix int_matrix_from(const py::object& rows) {
    auto outer = rows.cast<py::sequence>();
    const int n = static_cast<int>(py::len(outer));
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) {
        auto row = outer[i].cast<py::sequence>();
        if (static_cast<int>(py::len(row)) != n)
            throw py::value_error("matrix must be square");
        for (int j = 0; j < n; ++j)
            m.at(i, j) = mpz_class(py::str(row[j]).cast<std::string>());
    }
    return m;
}

py::object py_int(const mpz_class& v) {
    return py::module_::import("builtins").attr("int")(py::str(v.get_str()));
}

py::list int_matrix_to(const IntMatrix& m) {
    py::list rows;
    for (int i = 0; i < m.dim(); ++i) {
        py::list row;
        for (int j = 0; j < m.dim(); ++j) row.append(py_int(m.at(i, j)));
        rows.append(row);
    }
    return rows;
}

Eigen::MatrixXd dense_from(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw py::value_error("matrix must be square");
        for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> dense_to(const Eigen::MatrixXd& m) {
    std::vector<std::vector<double>> rows(static_cast<size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) rows[static_cast<size_t>(i)].push_back(m(i, j));
    return rows;
}

SpectralParam mu_from(const std::vector<std::complex<double>>& mu) {
    SpectralParam out;
    out.mu = mu;
    return out;
}

Region region_for(int n, double y_max, double h_box, double x_box) {
    return (n == 2) ? Region::halfplane(y_max) : Region::box(n, h_box, x_box);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hecke orbits, p-adic spherical transforms, and covering experiments on H^n";

    py::register_exception<CapExceededError>(m, "CapExceededError", PyExc_RuntimeError);

    // exact integer linear algebra
    m.def("det", [](const py::object& rows) { return py_int(det(int_matrix_from(rows))); },
          py::arg("matrix"), "Exact determinant of an integer matrix.");
    m.def("hnf_column",
          [](const py::object& rows) { return int_matrix_to(hnf_column(int_matrix_from(rows))); },
          py::arg("matrix"),
          "Column-style Hermite normal form (upper triangular, canonical).");
    m.def("snf",
          [](const py::object& rows) {
              py::list out;
              for (const auto& d : snf(int_matrix_from(rows)).d) out.append(py_int(d));
              return out;
          },
          py::arg("matrix"), "Elementary divisor chain d_1 | d_2 | ... | d_n.");

    // Hecke coset enumeration
    m.def("coset_count",
          [](int n, long p, int l) { return py_int(coset_count(n, p, l)); },
          py::arg("n"), py::arg("p"), py::arg("l"));
    m.def("enumerate_cosets",
          [](int n, long p, int l, uint64_t cap) {
              py::list out;
              for_each_coset(
                  n, p, l,
                  [&](const CosetRep& rep) {
                      py::dict d;
                      d["matrix"] = int_matrix_to(rep.matrix);
                      d["diag_valuations"] = rep.diag_valuations;
                      d["partition"] = partition_of(rep).parts;
                      out.append(d);
                  },
                  cap);
              return out;
          },
          py::arg("n"), py::arg("p"), py::arg("l"), py::arg("cap") = kDefaultRepCap);
    m.def("enumerate_orbit_reps",
          [](int n, long p, int l, uint64_t cap) {
              py::list out;
              for (const auto& g : enumerate_orbit_reps(n, p, l, cap).reps)
                  out.append(int_matrix_to(g));
              return out;
          },
          py::arg("n"), py::arg("p"), py::arg("l"), py::arg("cap") = kDefaultRepCap);
    m.def("partition_buckets",
          [](int n, long p, int l, uint64_t cap) {
              py::dict out;
              for (const auto& [part, size] : partition_buckets(n, p, l, cap))
                  out[py::tuple(py::cast(part.parts))] = size;
              return out;
          },
          py::arg("n"), py::arg("p"), py::arg("l"), py::arg("cap") = kDefaultRepCap);
    m.def("double_coset_size",
          [](int n, long p, const std::vector<int>& partition, uint64_t cap) {
              return double_coset_size(n, p, Partition{partition}, cap);
          },
          py::arg("n"), py::arg("p"), py::arg("partition"), py::arg("cap") = kDefaultRepCap);
    m.def("height",
          [](const std::vector<std::vector<std::string>>& rows, long p) {
              const int n = static_cast<int>(rows.size());
              RatMatrix g(n);
              for (int i = 0; i < n; ++i) {
                  if (static_cast<int>(rows[i].size()) != n)
                      throw py::value_error("matrix must be square");
                  for (int j = 0; j < n; ++j) {
                      mpq_class q(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                      q.canonicalize();
                      g.at(i, j) = q;
                  }
              }
              return height(g, p);
          },
          py::arg("matrix"), py::arg("p"),
          "Minimal k with p^k * matrix integral; entries are strings like '3/4'.");

    // spherical transforms
    m.def("rho", &rho, py::arg("n"));
    m.def("theta",
          [](const std::vector<std::complex<double>>& mu) { return theta(mu_from(mu)); },
          py::arg("mu"));
    m.def("chi",
          [](const std::vector<std::complex<double>>& mu, const std::vector<int>& valuations,
             long p) { return chi(mu_from(mu), valuations, p); },
          py::arg("mu"), py::arg("valuations"), py::arg("p"));
    m.def("spherical_transform_h",
          [](int n, long p, int l, const std::vector<std::complex<double>>& mu) {
              return spherical_transform_h(n, p, l, mu_from(mu));
          },
          py::arg("n"), py::arg("p"), py::arg("l"), py::arg("mu"));
    m.def("hecke_eigenvalue_lambda",
          [](int n, long p, int l, const std::vector<std::complex<double>>& mu) {
              return hecke_eigenvalue_lambda(n, p, l, mu_from(mu));
          },
          py::arg("n"), py::arg("p"), py::arg("l"), py::arg("mu"));
    m.def("symmetric_oracle",
          [](int n, long p, int l, const std::vector<std::complex<double>>& mu) {
              return symmetric_oracle(n, p, l, mu_from(mu));
          },
          py::arg("n"), py::arg("p"), py::arg("l"), py::arg("mu"));
    m.def("spherical_function",
          [](int n, long p, const std::vector<int>& partition,
             const std::vector<std::complex<double>>& mu, uint64_t cap) {
              return spherical_function(n, p, Partition{partition}, mu_from(mu), cap);
          },
          py::arg("n"), py::arg("p"), py::arg("partition"), py::arg("mu"),
          py::arg("cap") = kDefaultRepCap);
    m.def("sort_to_dominant",
          [](const std::vector<std::complex<double>>& mu) {
              return sort_to_dominant(mu_from(mu)).mu;
          },
          py::arg("mu"));
    m.def("spherical_decay_ratio",
          [](int n, long p, const std::vector<int>& partition,
             const std::vector<std::complex<double>>& mu, double delta, double bound,
             uint64_t cap) {
              auto rep = spherical_decay_ratio(n, p, Partition{partition}, mu_from(mu), delta,
                                               bound, cap);
              py::dict d;
              d["ratio"] = rep.ratio;
              d["bound"] = rep.bound;
              d["pass"] = rep.pass;
              return d;
          },
          py::arg("n"), py::arg("p"), py::arg("partition"), py::arg("mu"), py::arg("delta"),
          py::arg("bound") = 3.0, py::arg("cap") = kDefaultRepCap);

    // symmetric space
    m.def("default_basepoint",
          [](int n) { return dense_to(default_basepoint(n).Y); }, py::arg("n"));
    m.def("from_group",
          [](const std::vector<std::vector<double>>& g) {
              return dense_to(from_group(dense_from(g)).Y);
          },
          py::arg("g"));
    m.def("distance",
          [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y) {
              return distance(make_sym_point(dense_from(x)), make_sym_point(dense_from(y)));
          },
          py::arg("x"), py::arg("y"));
    m.def("act",
          [](const std::vector<std::vector<double>>& gamma,
             const std::vector<std::vector<double>>& x) {
              return dense_to(act(dense_from(gamma), make_sym_point(dense_from(x))).Y);
          },
          py::arg("gamma"), py::arg("x"));
    m.def("reduce",
          [](const std::vector<std::vector<double>>& x) {
              ReducedPoint r = reduce(make_sym_point(dense_from(x)));
              py::dict d;
              d["point"] = dense_to(r.point.Y);
              d["reducer"] = dense_to(r.reducer.cast<double>());
              return d;
          },
          py::arg("x"));
    m.def("dist_in_X",
          [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y) {
              return dist_in_X(make_sym_point(dense_from(x)), make_sym_point(dense_from(y)));
          },
          py::arg("x"), py::arg("y"));
    m.def("to_halfplane",
          [](const std::vector<std::vector<double>>& x) {
              HalfPlanePoint z = to_halfplane(make_sym_point(dense_from(x)));
              return py::make_tuple(z.x, z.y);
          },
          py::arg("x"));
    m.def("from_halfplane",
          [](double x, double y) { return dense_to(from_halfplane(x, y).Y); }, py::arg("x"),
          py::arg("y"));
    m.def("ball_volume_estimate",
          [](int n, double epsilon, int64_t samples, uint64_t seed, int threads) {
              auto est = ball_volume_estimate(n, epsilon, samples, seed, threads);
              py::dict d;
              d["n"] = est.n;
              d["epsilon"] = est.epsilon;
              d["volume"] = est.volume;
              d["stderr"] = est.std_error;
              d["samples"] = est.samples;
              return d;
          },
          py::arg("n"), py::arg("epsilon"), py::arg("samples"), py::arg("seed") = 0,
          py::arg("threads") = 0);

    // covering and exponent estimation
    m.def("orbit_points",
          [](const std::vector<std::vector<double>>& x0, int n, long p, int k, uint64_t cap,
             int threads) {
              OrbitCloud cloud = orbit_points(make_sym_point(dense_from(x0)), n, p, k, cap, threads);
              py::list out;
              for (const auto& pt : cloud.points) out.append(dense_to(pt.point.Y));
              return out;
          },
          py::arg("x0"), py::arg("n"), py::arg("p"), py::arg("k"),
          py::arg("cap") = kDefaultRepCap, py::arg("threads") = 0);
    m.def("coverage",
          [](int n, long p, int k, double epsilon, int64_t samples, uint64_t seed,
             std::optional<std::vector<std::vector<double>>> x0, double y_max, double h_box,
             double x_box, uint64_t cap, int threads) {
              SamplerConfig cfg;
              cfg.region = region_for(n, y_max, h_box, x_box);
              cfg.samples = samples;
              cfg.seed = seed;
              cfg.threads = threads;
              cfg.cap = cap;
              SymPoint base = x0 ? make_sym_point(dense_from(*x0)) : default_basepoint(n);
              CoverageReport rep = coverage(base, n, p, k, epsilon, cfg);
              py::dict d;
              d["n"] = rep.n;
              d["p"] = rep.p;
              d["k"] = rep.k;
              d["epsilon"] = rep.epsilon;
              d["samples"] = rep.samples;
              d["covered"] = rep.covered;
              d["fraction"] = rep.fraction;
              d["stderr"] = rep.std_error;
              d["seed"] = rep.seed;
              return d;
          },
          py::arg("n"), py::arg("p"), py::arg("k"), py::arg("epsilon"), py::arg("samples"),
          py::arg("seed") = 0, py::arg("x0") = std::nullopt, py::arg("y_max") = 2.0,
          py::arg("h_box") = 0.3, py::arg("x_box") = 0.5, py::arg("cap") = kDefaultRepCap,
          py::arg("threads") = 0);
    m.def("min_k_for_coverage",
          [](int n, long p, double epsilon, double target, int64_t samples, uint64_t seed,
             std::optional<std::vector<std::vector<double>>> x0, double y_max, double h_box,
             double x_box, uint64_t cap, int threads) {
              SamplerConfig cfg;
              cfg.region = region_for(n, y_max, h_box, x_box);
              cfg.samples = samples;
              cfg.seed = seed;
              cfg.threads = threads;
              cfg.cap = cap;
              SymPoint base = x0 ? make_sym_point(dense_from(*x0)) : default_basepoint(n);
              MinKResult r = min_k_for_coverage(base, n, p, epsilon, target, cfg);
              py::dict d;
              d["k"] = r.k;
              d["determined"] = r.determined;
              d["achieved_fraction"] = r.achieved_fraction;
              d["k_last"] = r.k_last;
              d["heuristic_k"] = r.heuristic_k;
              return d;
          },
          py::arg("n"), py::arg("p"), py::arg("epsilon"), py::arg("target"), py::arg("samples"),
          py::arg("seed") = 0, py::arg("x0") = std::nullopt, py::arg("y_max") = 2.0,
          py::arg("h_box") = 0.3, py::arg("x_box") = 0.5, py::arg("cap") = kDefaultRepCap,
          py::arg("threads") = 0);
    m.def("fit_kappa_synthetic",
          [](double c, int n, long p, const std::vector<double>& epsilons) {
              ExponentFit fit = fit_kappa(n, p, synthetic_grid(c, n, p, epsilons));
              py::dict d;
              d["kappa_hat"] = fit.kappa_hat;
              d["slope_stderr"] = fit.slope_stderr;
              d["intercept"] = fit.intercept;
              d["normalization"] = fit.normalization;
              return d;
          },
          py::arg("c"), py::arg("n"), py::arg("p"), py::arg("epsilons"));
    m.def("halfplane_figure_svg",
          [](const std::vector<std::vector<double>>& x0, int n, long p, int k, double epsilon,
             double y_max, uint64_t cap, int threads) {
              OrbitCloud cloud = orbit_points(make_sym_point(dense_from(x0)), n, p, k, cap, threads);
              return halfplane_figure_svg(cloud, epsilon, Region::halfplane(y_max));
          },
          py::arg("x0"), py::arg("n"), py::arg("p"), py::arg("k"), py::arg("epsilon"),
          py::arg("y_max") = 2.0, py::arg("cap") = kDefaultRepCap, py::arg("threads") = 0);
}
