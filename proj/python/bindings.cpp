#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ucplab/carleman.hpp"
#include "ucplab/counterexamples.hpp"
#include "ucplab/harness/suites.hpp"
#include "ucplab/sw/model.hpp"

namespace py = pybind11;
using namespace ucplab;

namespace {

harness::ExperimentConfig make_config(const std::string& suite, std::uint64_t seed, unsigned jobs,
                                      const std::map<std::string, harness::Value>& overrides) {
    harness::ConfigFile f;
    f.top["seed"] = static_cast<std::int64_t>(seed);
    f.top["jobs"] = static_cast<std::int64_t>(jobs);
    f.sections[suite] = overrides;
    return harness::resolve_config(f, suite);
}

py::dict branch_dict(const BranchedSolution& s) {
    py::dict d;
    d["label"] = s.label;
    d["x"] = s.x;
    d["u0"] = s.u0;
    d["u1"] = s.u1;
    d["residual_u1"] = s.residual_u1;
    d["split_diff"] = s.split_diff;
    d["inner_product"] = s.inner_product;
    d["endpoint"] = s.endpoint;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "unique continuation laboratory";

    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<harness::ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("suites", [] {
        py::list out;
        for (const auto& s : harness::suite_catalogue()) {
            py::dict d;
            d["name"] = s.name;
            d["summary"] = s.summary;
            d["criteria"] = s.criteria;
            out.append(d);
        }
        return out;
    });
    m.def("list_suites_text", &harness::list_suites_text);

    m.def(
        "run_suite_raw",
        [](const std::string& suite, std::uint64_t seed, unsigned jobs,
           const std::map<std::string, harness::Value>& overrides) {
            const auto cfg = make_config(suite, seed, jobs, overrides);
            harness::SuiteResult r;
            {
                py::gil_scoped_release release;
                r = harness::run_suite(cfg);
            }
            return py::make_tuple(harness::report_json(cfg, r), r.table.csv());
        },
        py::arg("suite"), py::arg("seed") = 42, py::arg("jobs") = 1,
        py::arg("overrides") = std::map<std::string, harness::Value>{});

    m.def(
        "bump_cutoff",
        [](double T, double t) { return bump_cutoff(CarlemanGeometry::interval(T, 401), t); },
        py::arg("T"), py::arg("t"));

    m.def(
        "rank_one_counterexample",
        [](std::size_t nodes) { return branch_dict(rank_one_counterexample(smoothed_indicator(), IntervalDomain{0.0, 2.0, nodes})); },
        py::arg("nodes") = 16385);
    m.def(
        "peano_branches",
        [](const std::string& kind, double branch_point, double lo, double hi, std::size_t nodes) {
            const auto c = kind == "sqrt" ? PeanoCase::sqrt_rhs : PeanoCase::two_thirds;
            return branch_dict(peano_branches(c, branch_point, IntervalDomain{lo, hi, nodes}));
        },
        py::arg("kind"), py::arg("branch_point"), py::arg("lo"), py::arg("hi"), py::arg("nodes") = 4097);

    m.def(
        "csd",
        [](int N, double amplitude, std::uint64_t seed, const std::string& which) {
            const auto c = sw::SWConfiguration::random(N, amplitude, seed, 2);
            return sw::csd(c, sw::PerturbationParams::standard(N), sw::parse_case(which));
        },
        py::arg("N"), py::arg("amplitude"), py::arg("seed"), py::arg("case") = "unperturbed");
    m.def(
        "directional_derivatives",
        [](int N, double amplitude, std::uint64_t seed, const std::string& which, double h) {
            const auto c = sw::SWConfiguration::random(N, amplitude, seed, 2);
            const auto p = sw::PerturbationParams::standard(N);
            const auto k = sw::parse_case(which);
            const auto dir = sw::Tangent::random(N, 1.0, seed + 1);
            const double fd = (sw::csd(sw::displace(c, h, dir), p, k) - sw::csd(sw::displace(c, -h, dir), p, k)) / (2.0 * h);
            return py::make_tuple(fd, sw::tangent_dot(sw::grad_csd(c, p, k), dir));
        },
        py::arg("N"), py::arg("amplitude"), py::arg("seed"), py::arg("case"), py::arg("h"));
}
