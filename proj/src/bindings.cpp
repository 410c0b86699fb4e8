#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hdla/harness.hpp"
#include "hdla/observables.hpp"

namespace py = pybind11;
using namespace hdla;

namespace {

py::dict record_to_dict(const TrialRecord& rec) {
    py::dict d;
    d["n"] = rec.n;
    d["t_end"] = rec.t_end ? py::object(py::int_(*rec.t_end)) : py::object(py::none());
    d["theta"] = rec.theta;
    d["steps"] = rec.steps;
    d["level_counts"] = rec.final_level_counts;
    return d;
}

} // namespace

PYBIND11_MODULE(hdla_core, m) {
    m.doc() = "Diffusion-limited aggregation on the Boolean lattice: core operations";

    py::class_<ClusterState>(m, "ClusterState")
        .def(py::init<int>(), py::arg("n"))
        .def_property_readonly("n", &ClusterState::dimension)
        .def_property_readonly("steps", &ClusterState::steps)
        .def_property_readonly("theta", &ClusterState::theta)
        .def_property_readonly("terminated", &ClusterState::terminated)
        .def_property_readonly("level_counts", &ClusterState::level_counts)
        .def("occupied", [](const ClusterState& c, std::uint64_t bits) {
            return c.occupied(static_cast<VertexBits>(bits));
        });

    m.def("level", [](std::uint64_t bits, int n) {
        return level(make_vertex(static_cast<VertexBits>(bits), n));
    });

    m.def(
        "sample_walk",
        [](int n, std::uint64_t seed) {
            Xoshiro256 rng(seed);
            const auto walk = sample_walk(rng, n);
            std::vector<std::uint64_t> steps;
            for (const auto& v : walk.steps()) steps.push_back(v.bits);
            return steps;
        },
        py::arg("n"), py::arg("seed"));

    m.def(
        "simulate_trial",
        [](int n, std::uint64_t master_seed, std::uint64_t trial) {
            ClusterState c(n);
            Xoshiro256 rng = Xoshiro256::for_trial(master_seed, trial);
            RunSpec spec;
            spec.stop = StopRule::until_termination();
            const auto rec = run(c, rng, spec);
            auto d = record_to_dict(rec);
            d["isolated_path_length"] = obs::isolated_path_length(c);
            return d;
        },
        py::arg("n"), py::arg("master_seed") = harness::kPilotSeed, py::arg("trial") = 0);

    m.def(
        "upsilon",
        [](const ClusterState& c, std::uint64_t bits) {
            return obs::upsilon(c, make_vertex(static_cast<VertexBits>(bits), c.dimension()));
        },
        py::arg("cluster"), py::arg("vertex"));

    m.def(
        "phi",
        [](const ClusterState& c, std::uint64_t bits, const std::string& method,
           std::uint64_t seed, std::uint64_t samples) {
            const auto v = make_vertex(static_cast<VertexBits>(bits), c.dimension());
            if (method == "exact_dp") return obs::phi(c, v, obs::PhiMethod::exact_dp).value;
            if (method == "brute_force") return obs::phi(c, v, obs::PhiMethod::brute_force).value;
            Xoshiro256 rng(seed);
            return obs::phi(c, v, obs::PhiMethod::monte_carlo, &rng, samples).value;
        },
        py::arg("cluster"), py::arg("vertex"), py::arg("method") = "exact_dp",
        py::arg("seed") = 1, py::arg("samples") = 100000);

    m.def(
        "deposit",
        [](ClusterState& c, std::uint64_t seed) {
            Xoshiro256 rng(seed);
            const auto out = c.deposit(rng);
            return out.kind == DepositOutcome::Kind::deposited
                       ? py::object(py::int_(out.vertex.bits))
                       : py::object(py::none());
        },
        py::arg("cluster"), py::arg("seed"));

    py::class_<theory::TheoryContext>(m, "TheoryContext")
        .def_static("from_eps", &theory::TheoryContext::from_eps, py::arg("n"), py::arg("eps"))
        .def_static("from_exponent", &theory::TheoryContext::from_exponent, py::arg("n"),
                    py::arg("a"))
        .def_readonly("n", &theory::TheoryContext::n)
        .def_readonly("ell", &theory::TheoryContext::ell)
        .def_readonly("k", &theory::TheoryContext::k)
        .def_readonly("j0", &theory::TheoryContext::j0)
        .def_readonly("omega", &theory::TheoryContext::omega)
        .def_readonly("theta0", &theory::TheoryContext::theta0)
        .def_property_readonly("log_mu0",
                               [](const theory::TheoryContext& c) { return c.mu0.log_value(); })
        .def_property_readonly("log_mu1", [](const theory::TheoryContext& c) {
            return c.mu1 ? py::object(py::float_(c.mu1->log_value())) : py::object(py::none());
        });

    m.def("log_zeta", [](const theory::TheoryContext& ctx, int j) {
        return theory::zeta(j, ctx).log_value();
    });
    m.def("log_xi", [](const theory::TheoryContext& ctx, int j, double log_t) {
        return theory::xi(j, LogScalar::from_log(log_t), ctx).log_value();
    });
    m.def("xi_ratio", &theory::xi_ratio);
    m.def("tau_k_eps", [](std::int64_t n, std::int64_t k, double eps) {
        const auto r = theory::tau_k_eps(n, k, eps);
        return py::make_tuple(r.tau, r.omega);
    });
    m.def("log_eta", [](std::int64_t n, std::int64_t ell, std::int64_t j, bool exact) {
        return theory::eta(n, ell, j, exact ? theory::EtaMode::exact : theory::EtaMode::asymptotic)
            .log_value();
    }, py::arg("n"), py::arg("ell"), py::arg("j"), py::arg("exact") = true);
    m.def("notall_bound", &theory::notall_bound);
    m.def("conc_bound", &theory::conc_bound);
    m.def("hoeffding_bound", &theory::hoeffding_bound);

    m.attr("__version__") = "0.1.0";
    m.attr("PILOT_SEED") = harness::kPilotSeed;
}
