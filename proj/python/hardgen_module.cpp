#include "hardgen/colgen.hpp"
#include "hardgen/core.hpp"
#include "hardgen/harness.hpp"
#include "hardgen/ldr.hpp"
#include "hardgen/midgen.hpp"
#include "hardgen/mro.hpp"
#include "hardgen/robust.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace hardgen;

namespace {

MasterMethod master_from_string(const std::string& s) {
    if (s == "exact") return MasterMethod::Exact;
    if (s == "alternating") return MasterMethod::Alternating;
    if (s == "colgen") return MasterMethod::ColGen;
    throw InvariantError("master must be exact, alternating or colgen");
}

InnerMethod inner_from_string(const std::string& s) {
    if (s == "exact") return InnerMethod::Exact;
    if (s == "heuristic") return InnerMethod::Heuristic;
    throw InvariantError("inner must be exact or heuristic");
}

CandidatePool pool_from_lists(const std::vector<BinaryVec>& solutions) {
    CandidatePool pool;
    for (const auto& x : solutions) pool.add(x);
    if (pool.size() == 0) throw InvariantError("candidate pool is empty");
    return pool;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Hard instance generation for min-max robust combinatorial optimization";

    py::register_exception<InvariantError>(m, "InvariantError");
    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<ScaleError>(m, "ScaleError");
    py::register_exception<NumericalError>(m, "NumericalError");
    py::register_exception<TimeLimitError>(m, "TimeLimitError");

    py::class_<Instance>(m, "Instance")
        .def(py::init<>())
        .def_readwrite("n", &Instance::n)
        .def_readwrite("N", &Instance::N)
        .def_readwrite("max_cost", &Instance::max_cost)
        .def_readwrite("p", &Instance::p)
        .def_readwrite("m", &Instance::m)
        .def_readwrite("costs", &Instance::costs)
        .def_property(
            "kind", [](const Instance& inst) { return to_string(inst.kind); },
            [](Instance& inst, const std::string& s) { inst.kind = problem_kind_from_string(s); })
        .def("validate", &Instance::validate)
        .def("__repr__", [](const Instance& inst) {
            std::ostringstream os;
            os << "Instance(kind=" << to_string(inst.kind) << ", n=" << inst.n
               << ", N=" << inst.N;
            if (inst.kind == ProblemKind::Selection)
                os << ", p=" << inst.p;
            else
                os << ", m=" << inst.m;
            os << ")";
            return os.str();
        });

    py::class_<UncertaintyBox>(m, "UncertaintyBox")
        .def_readonly("lower", &UncertaintyBox::lower)
        .def_readonly("upper", &UncertaintyBox::upper)
        .def_readonly("target_sum", &UncertaintyBox::target_sum)
        .def("contains", &UncertaintyBox::contains, py::arg("c"), py::arg("tol") = 1e-7);

    py::class_<RobustResult>(m, "RobustResult")
        .def_readonly("x", &RobustResult::x)
        .def_readonly("value", &RobustResult::value)
        .def_readonly("nodes", &RobustResult::nodes)
        .def_readonly("lp_solves", &RobustResult::lp_solves)
        .def_readonly("wall_time", &RobustResult::wall_time)
        .def_readonly("proven_optimal", &RobustResult::proven_optimal)
        .def_readonly("hit_time_limit", &RobustResult::hit_time_limit);

    py::class_<MroIteration>(m, "MroIteration")
        .def_readonly("upper", &MroIteration::upper)
        .def_readonly("lower", &MroIteration::lower)
        .def_readonly("new_candidate", &MroIteration::new_candidate);

    py::class_<MroRun>(m, "MroRun")
        .def_readonly("iterations", &MroRun::iterations)
        .def_readonly("generation_time", &MroRun::generation_time)
        .def_readonly("inner_nodes", &MroRun::inner_nodes)
        .def_property_readonly("stop",
                               [](const MroRun& run) { return to_string(run.stop); });

    py::class_<MasterSolution>(m, "MasterSolution")
        .def_readonly("scenarios", &MasterSolution::scenarios)
        .def_readonly("assignment", &MasterSolution::assignment)
        .def_readonly("value", &MasterSolution::value)
        .def_readonly("trace", &MasterSolution::trace);

    py::class_<LdrResult>(m, "LdrResult")
        .def_readonly("hardened", &LdrResult::hardened)
        .def_readonly("reported_value", &LdrResult::reported_value)
        .def_readonly("iterations", &LdrResult::iterations)
        .def_readonly("trace", &LdrResult::trace);

    py::class_<MidResult>(m, "MidResult")
        .def_readonly("hardened", &MidResult::hardened)
        .def_readonly("value", &MidResult::value)
        .def_readonly("x_hat", &MidResult::x_hat)
        .def_readonly("nodes", &MidResult::nodes)
        .def_readonly("proven_optimal", &MidResult::proven_optimal);

    m.def(
        "sample_ru",
        [](const std::string& kind, int n, int N, double max_cost, int p_or_m,
           std::uint64_t seed, bool symmetric) {
            return sample_ru(problem_kind_from_string(kind), n, N, max_cost, p_or_m, seed,
                             symmetric);
        },
        py::arg("kind"), py::arg("n"), py::arg("N"), py::arg("max_cost"), py::arg("p_or_m"),
        py::arg("seed"), py::arg("symmetric") = false,
        "Uniform integer costs in {0..C}, deterministic in the seed");

    m.def("read_instance", &read_instance_file, py::arg("path"));
    m.def("write_instance", &write_instance_file, py::arg("instance"), py::arg("path"));

    m.def("build_uncertainty", &build_uncertainty, py::arg("instance"), py::arg("budget"));

    m.def("robust_value", &robust_value, py::arg("instance"), py::arg("x"));
    m.def(
        "robust_solve_exact",
        [](const Instance& inst, std::optional<double> time_limit) {
            return robust_solve_exact(inst, time_limit);
        },
        py::arg("instance"), py::arg("time_limit") = py::none());
    m.def("robust_solve_heuristic", &robust_solve_heuristic, py::arg("instance"));
    m.def("sorted_objective_vector", &sorted_objective_vector, py::arg("instance"));

    m.def(
        "master_solve_exact",
        [](const std::vector<BinaryVec>& pool, const std::vector<UncertaintyBox>& boxes) {
            return master_solve_exact(pool_from_lists(pool), boxes);
        },
        py::arg("pool"), py::arg("boxes"));
    m.def(
        "master_solve_alternating",
        [](const std::vector<BinaryVec>& pool, const std::vector<UncertaintyBox>& boxes,
           const std::vector<std::vector<double>>& init_costs) {
            return master_solve_alternating(pool_from_lists(pool), boxes, init_costs);
        },
        py::arg("pool"), py::arg("boxes"), py::arg("init_costs"));
    m.def(
        "colgen_master",
        [](const std::vector<BinaryVec>& pool, const std::vector<UncertaintyBox>& boxes) {
            return colgen_master(pool_from_lists(pool), boxes);
        },
        py::arg("pool"), py::arg("boxes"));

    m.def(
        "mro_generate",
        [](const Instance& inst, double budget, const std::string& master,
           const std::string& inner, std::optional<double> time_limit) {
            MroOptions options;
            options.budget = budget;
            options.master = master_from_string(master);
            options.inner = inner_from_string(inner);
            options.time_limit_s = time_limit;
            return mro_generate(inst, options);
        },
        py::arg("instance"), py::arg("budget"), py::arg("master") = "exact",
        py::arg("inner") = "exact", py::arg("time_limit") = py::none(),
        "Returns (hardened_instance, run)");

    m.def("ldr_solve", &ldr_solve, py::arg("instance"), py::arg("budget"),
          py::arg("max_iters") = 100);
    m.def(
        "mid_generate",
        [](const Instance& inst, double budget, std::optional<double> time_limit) {
            return mid_generate(inst, budget, time_limit);
        },
        py::arg("instance"), py::arg("budget"), py::arg("time_limit") = py::none());

    m.def(
        "harden_instance",
        [](const Instance& inst, const std::string& method, double budget,
           std::optional<double> time_limit) {
            HardenOutcome out =
                harden_instance(inst, gen_method_from_string(method), budget, time_limit);
            return py::make_tuple(out.instance, out.log.dump());
        },
        py::arg("instance"), py::arg("method"), py::arg("budget"),
        py::arg("time_limit") = py::none(),
        "Returns (hardened_instance, run_log_json)");

    m.def(
        "evaluate",
        [](const Instance& inst, std::optional<double> time_limit) {
            return evaluate_to_json(inst, time_limit).dump();
        },
        py::arg("instance"), py::arg("time_limit") = py::none(),
        "Exact hardness record as a JSON string");
}
