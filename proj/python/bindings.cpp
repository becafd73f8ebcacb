#include "fbra/analytic.hpp"
#include "fbra/error.hpp"
#include "fbra/io.hpp"
#include "fbra/oracle.hpp"
#include "fbra/qbd.hpp"
#include "fbra/simulator.hpp"
#include "fbra/sweep.hpp"
#include "fbra/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fbra;

namespace {

py::object cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> py::object {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return py::none();
            else return py::cast(v);
        },
        c);
}

// Tables become a dict (single record) or a list of dicts.
py::object records(const Table& t) {
    py::list out;
    for (const auto& row : t.rows) {
        py::dict d;
        for (std::size_t i = 0; i < row.size(); ++i) d[py::str(t.columns[i])] = cell(row[i]);
        out.append(std::move(d));
    }
    if (t.single_record && out.size() == 1) return out[0];
    return std::move(out);
}

py::list matrix(const Mat2& m) {
    return py::cast(std::vector<std::vector<double>>{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
}

py::dict verdict(const RegionVerdict& v) {
    py::dict d;
    d["stable"] = v.stable;
    d["binding"] = std::string(to_string(v.binding));
    d["secondary"] = std::string(to_string(v.secondary));
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stability regions of two queues under random access with feedback priority";
    static py::exception<Error> exc(m, "FbraError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    m.attr("DEFAULT_SEED") = kDefaultSeed;

    m.def("theorem1_boundary", &theorem1_boundary, py::arg("lambda1"));
    m.def("ra_boundary", &ra_boundary, py::arg("lambda1"));
    m.def("td_boundary", &td_boundary, py::arg("lambda1"));
    m.def("optimal_p2", &optimal_p2, py::arg("lambda1"));
    m.def(
        "boundary",
        [](const std::string& scheme, double step) { return records(boundary_table(parse_scheme(scheme), step)); },
        py::arg("scheme") = "priority", py::arg("step") = 0.001);

    m.def(
        "region_contains",
        [](double p1, double p2, double l1, double l2) {
            return verdict(lemma3_contains({p1, p2}, ArrivalRates(l1, l2)));
        },
        py::arg("p1"), py::arg("p2"), py::arg("lambda1"), py::arg("lambda2"));
    m.def(
        "region",
        [](double p1, double p2, double step) { return records(region_table({p1, p2}, step)); },
        py::arg("p1"), py::arg("p2"), py::arg("lambda_step") = 0.01);

    m.def(
        "ds1_steady_state",
        [](double p1, double p2, double l1) {
            const auto s = ds1_steady_state({p1, p2}, l1);
            py::dict d;
            d["rho"] = s.rho;
            d["pi0"] = s.pi0;
            d["eps1"] = s.eps1;
            d["mu2"] = ds1_service_rate_q2({p1, p2}, l1);
            return d;
        },
        py::arg("p1"), py::arg("p2"), py::arg("lambda1"));
    m.def(
        "ds3_steady_state",
        [](double p1, double p2) {
            const auto s = ds3_steady_state({p1, p2});
            py::dict d;
            d["pi_f"] = s.pi_f;
            d["pi_r"] = s.pi_r;
            d["mu1"] = s.mu1;
            d["mu2"] = s.mu2;
            return d;
        },
        py::arg("p1"), py::arg("p2"));

    m.def(
        "rate_matrix",
        [](double p1, double p2, double l2, bool iterative) {
            if (iterative) return matrix(solve_rate_matrix(qbd_blocks({p1, p2}, l2)).r);
            return matrix(closed_form_R({p1, p2}, l2));
        },
        py::arg("p1"), py::arg("p2"), py::arg("lambda2"), py::arg("iterative") = false);
    m.def(
        "spectral_radius",
        [](const std::array<std::array<double, 2>, 2>& r) {
            return spectral_radius(Mat2::of(r[0][0], r[0][1], r[1][0], r[1][1]));
        },
        py::arg("r"));
    m.def(
        "analyze_qbd", [](double p1, double p2, double l2) { return records(qbd_table(analyze_qbd({p1, p2}, l2))); },
        py::arg("p1"), py::arg("p2"), py::arg("lambda2"));

    m.def(
        "oracle_stationary",
        [](const std::string& system, double p1, double p2, double rate, std::size_t max_level) {
            const auto sys = system == "ds1" ? DominantSystem::DS1
                             : system == "ds2"
                                 ? DominantSystem::DS2
                                 : (raise(ErrorKind::InvalidArgument, "system must be ds1 or ds2"), DominantSystem::DS1);
            return stationary(build_chain(sys, {p1, p2}, rate, max_level)).mass;
        },
        py::arg("system"), py::arg("p1"), py::arg("p2"), py::arg("rate"), py::arg("max_level") = 200);

    m.def(
        "simulate",
        [](const std::string& kind, const std::string& mode, double p1, double p2, double l1, double l2,
           std::uint64_t slots, std::optional<std::uint64_t> warmup, std::uint64_t seed, std::uint32_t batches) {
            SimulationConfig cfg;
            cfg.kind = parse_protocol_kind(kind);
            cfg.mode = parse_dominance_mode(mode);
            cfg.p = AccessProbabilities(p1, p2);
            cfg.l = ArrivalRates(l1, l2);
            cfg.horizon = slots;
            cfg.warmup = warmup;
            cfg.seed = seed;
            cfg.batches = batches;
            SimulationMetrics metrics;
            {
                py::gil_scoped_release release;
                metrics = run(cfg);
            }
            return records(simulation_table(metrics));
        },
        py::arg("kind") = "feedback", py::arg("mode") = "none", py::arg("p1") = 0.5, py::arg("p2") = 0.5,
        py::arg("lambda1") = 0.1, py::arg("lambda2") = 0.1, py::arg("slots") = 1'000'000,
        py::arg("warmup") = py::none(), py::arg("seed") = kDefaultSeed, py::arg("batches") = 100);

    m.def(
        "sweep",
        [](double p_step, double lambda_step, bool points) {
            const auto data = sweep(p_step, lambda_step, points);
            return records(points ? sweep_points_table(data) : sweep_table(data));
        },
        py::arg("p_step") = 0.01, py::arg("lambda_step") = 0.005, py::arg("points") = false);

    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed) {
            return records(verify_table(run_verify(parse_verify_suite(suite), seed)));
        },
        py::arg("suite") = "all", py::arg("seed") = kDefaultSeed);
}
