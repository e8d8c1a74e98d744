// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "windtunnel/corpus_io.hpp"
#include "windtunnel/corpus_reconstructor.hpp"
#include "windtunnel/engine.hpp"
#include "windtunnel/eval_metrics.hpp"
#include "windtunnel/graph_builder.hpp"
#include "windtunnel/graph_sampler.hpp"
#include "windtunnel/powerlaw.hpp"

namespace py = pybind11;
using namespace windtunnel;

namespace {

template <class T>
std::string repr_of(const char* name, const T& fields) {
    return std::string(name) + std::string(py::str(py::repr(py::cast(fields))));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Community-preserving corpus sampling";

    py::register_exception<Error>(m, "WindTunnelError", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Engine>(m, "Engine")
        .def(py::init([](std::size_t workers, std::size_t memory_budget,
                         std::filesystem::path tmp_dir) {
                 return Engine(EngineConfig{workers, memory_budget, std::move(tmp_dir)});
             }),
             py::arg("workers") = 0, py::arg("memory_budget") = EngineConfig{}.memory_budget,
             py::arg("tmp_dir") = std::filesystem::path())
        .def_property_readonly("workers", &Engine::workers);

    py::class_<QueryRecord>(m, "QueryRecord")
        .def(py::init<std::string, std::string>(), py::arg("query_id"), py::arg("query_content"))
        .def_readwrite("query_id", &QueryRecord::query_id)
        .def_readwrite("query_content", &QueryRecord::query_content)
        .def("__eq__", [](const QueryRecord& a, const QueryRecord& b) { return a == b; })
        .def("__repr__", [](const QueryRecord& r) {
            return repr_of("QueryRecord", std::make_tuple(r.query_id, r.query_content));
        });

    py::class_<EntityRecord>(m, "EntityRecord")
        .def(py::init<std::string, std::string>(), py::arg("entity_id"), py::arg("entity_content"))
        .def_readwrite("entity_id", &EntityRecord::entity_id)
        .def_readwrite("entity_content", &EntityRecord::entity_content)
        .def("__eq__", [](const EntityRecord& a, const EntityRecord& b) { return a == b; })
        .def("__repr__", [](const EntityRecord& r) {
            return repr_of("EntityRecord", std::make_tuple(r.entity_id, r.entity_content));
        });

    py::class_<QRelRecord>(m, "QRelRecord")
        .def(py::init<std::string, std::string, double>(), py::arg("entity_id"),
             py::arg("query_id"), py::arg("score"))
        .def_readwrite("entity_id", &QRelRecord::entity_id)
        .def_readwrite("query_id", &QRelRecord::query_id)
        .def_readwrite("score", &QRelRecord::score)
        .def("__eq__", [](const QRelRecord& a, const QRelRecord& b) { return a == b; })
        .def("__repr__", [](const QRelRecord& r) {
            return repr_of("QRelRecord", std::make_tuple(r.entity_id, r.query_id, r.score));
        });

    py::class_<RunRecord>(m, "RunRecord")
        .def(py::init<std::string, std::string, std::uint32_t, double, std::string>(),
             py::arg("query_id"), py::arg("entity_id"), py::arg("rank"), py::arg("score"),
             py::arg("tag") = "run")
        .def_readwrite("query_id", &RunRecord::query_id)
        .def_readwrite("entity_id", &RunRecord::entity_id)
        .def_readwrite("rank", &RunRecord::rank)
        .def_readwrite("score", &RunRecord::score)
        .def_readwrite("tag", &RunRecord::tag);

    py::class_<CorpusSample>(m, "CorpusSample")
        .def(py::init<>())
        .def(py::init<std::vector<QueryRecord>, std::vector<EntityRecord>,
                      std::vector<QRelRecord>>(),
             py::arg("queries"), py::arg("entities"), py::arg("qrels"))
        .def_readwrite("queries", &CorpusSample::queries)
        .def_readwrite("entities", &CorpusSample::entities)
        .def_readwrite("qrels", &CorpusSample::qrels)
        .def("empty", &CorpusSample::empty)
        .def("__eq__", [](const CorpusSample& a, const CorpusSample& b) { return a == b; });

    m.def("read_queries", &read_queries, py::arg("path"));
    m.def("read_corpus", &read_corpus, py::arg("path"));
    m.def(
        "read_qrels",
        [](const std::filesystem::path& path, const std::string& format) {
            return read_qrels(path, parse_qrels_format(format));
        },
        py::arg("path"), py::arg("format") = "trec-qrels");
    m.def("read_run", &read_run, py::arg("path"));
    m.def("read_sample", &read_sample, py::arg("dir"));
    m.def("write_sample", &write_sample, py::arg("sample"), py::arg("dir"),
          py::arg("allow_empty") = false);
    m.def("validate_sample", &validate_sample, py::arg("sample"));

    py::class_<AffinityEdge>(m, "AffinityEdge")
        .def(py::init<std::string, std::string, double>(), py::arg("entity_a"),
             py::arg("entity_b"), py::arg("affinity"))
        .def_readwrite("entity_a", &AffinityEdge::entity_a)
        .def_readwrite("entity_b", &AffinityEdge::entity_b)
        .def_readwrite("affinity", &AffinityEdge::affinity)
        .def("__eq__", [](const AffinityEdge& a, const AffinityEdge& b) { return a == b; })
        .def("__repr__", [](const AffinityEdge& e) {
            return repr_of("AffinityEdge", std::make_tuple(e.entity_a, e.entity_b, e.affinity));
        });

    m.def("filter_qrels", &filter_qrels, py::arg("qrels"), py::arg("tau") = kNoThreshold);
    m.def("percentile_cutoff", &percentile_cutoff, py::arg("qrels"), py::arg("top_fraction"));
    m.def(
        "build_affinity_edges",
        [](const Engine& engine, const std::vector<QRelRecord>& qrels, std::size_t fanout) {
            py::gil_scoped_release release;
            return build_affinity_edges(engine, qrels, GraphBuildOptions{fanout}).edges;
        },
        py::arg("engine"), py::arg("qrels"), py::arg("max_query_fanout") = kDefaultMaxQueryFanout);
    m.def("degree_distribution", &degree_distribution, py::arg("edges"));
    m.def("read_edges", &read_edges, py::arg("path"));
    m.def("write_edges", &write_edges, py::arg("edges"), py::arg("path"));

    py::class_<ClusterAssignment>(m, "ClusterAssignment")
        .def(py::init<std::string, std::vector<std::string>>(), py::arg("label"),
             py::arg("members"))
        .def_readwrite("label", &ClusterAssignment::label)
        .def_readwrite("members", &ClusterAssignment::members)
        .def("__len__", &ClusterAssignment::size);

    py::class_<ClusterDecision>(m, "ClusterDecision")
        .def_readonly("label", &ClusterDecision::label)
        .def_readonly("size", &ClusterDecision::size)
        .def_readonly("probability", &ClusterDecision::probability)
        .def_readonly("selected", &ClusterDecision::selected);

    py::class_<SamplePlan>(m, "SamplePlan")
        .def_readonly("decisions", &SamplePlan::decisions)
        .def_readonly("seed", &SamplePlan::seed)
        .def_readonly("scale", &SamplePlan::scale)
        .def("selected_labels", &SamplePlan::selected_labels);

    m.def(
        "propagate_labels",
        [](const Engine& engine, const std::vector<AffinityEdge>& edges, std::uint32_t rounds) {
            std::map<std::string, std::string> labels;
            py::gil_scoped_release release;
            for (auto& s : propagate_labels(engine, edges, rounds).labels) {
                labels.emplace(std::move(s.node_id), std::move(s.label));
            }
            return labels;
        },
        py::arg("engine"), py::arg("edges"), py::arg("rounds") = kDefaultRounds,
        "Final label per node as a dict.");
    m.def(
        "extract_clusters",
        [](const Engine& engine, const std::map<std::string, std::string>& labels) {
            std::vector<LabelState> states;
            for (const auto& [node, label] : labels) {
                states.push_back({node, label, 0});
            }
            return extract_clusters(engine, states);
        },
        py::arg("engine"), py::arg("labels"));
    m.def("sample_clusters", &sample_clusters, py::arg("clusters"), py::arg("total_entities"),
          py::arg("seed"), py::arg("scale") = 1.0);
    m.def("calibrate_scale", &calibrate_scale, py::arg("clusters"), py::arg("total_entities"),
          py::arg("target_entities"));

    m.def("reconstruct", &reconstruct, py::arg("engine"), py::arg("plan"), py::arg("clusters"),
          py::arg("queries"), py::arg("entities"), py::arg("qrels"));
    m.def("uniform_sample", &uniform_sample, py::arg("engine"), py::arg("entities"),
          py::arg("queries"), py::arg("qrels"), py::arg("k"), py::arg("seed"));

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("rho", &PowerLawFit::rho)
        .def_readonly("gamma", &PowerLawFit::gamma)
        .def_readonly("std_error", &PowerLawFit::std_error)
        .def_readonly("log_likelihood", &PowerLawFit::log_likelihood)
        .def_readonly("iterations", &PowerLawFit::iterations)
        .def_readonly("n", &PowerLawFit::n)
        .def_readonly("boundary_warning", &PowerLawFit::boundary_warning)
        .def_readonly("trace", &PowerLawFit::trace);

    m.def("yule_simon_pmf", &yule_simon_pmf, py::arg("k"), py::arg("rho"));
    m.def(
        "fit_yule_simon",
        [](const std::vector<std::uint64_t>& degrees, double tol, std::uint32_t max_iter) {
            return fit_yule_simon(DegreeSample::from_values(degrees), tol, max_iter);
        },
        py::arg("degrees"), py::arg("tol") = 1e-8, py::arg("max_iter") = 500);
    m.def("sample_yule_simon", &sample_yule_simon, py::arg("rho"), py::arg("n"), py::arg("seed"));

    py::class_<PrecisionReport>(m, "PrecisionReport")
        .def_readonly("k", &PrecisionReport::k)
        .def_readonly("per_query", &PrecisionReport::per_query)
        .def_readonly("mean", &PrecisionReport::mean)
        .def_readonly("judged_queries", &PrecisionReport::judged_queries);

    py::class_<DensityReport>(m, "DensityReport")
        .def_readonly("query_count", &DensityReport::query_count)
        .def_readonly("entity_count", &DensityReport::entity_count)
        .def_readonly("qrel_count", &DensityReport::qrel_count)
        .def_readonly("rho_q", &DensityReport::rho_q);

    m.def("precision_at_k", &precision_at_k, py::arg("run"), py::arg("qrels"), py::arg("k"),
          py::arg("relevance_threshold") = kDefaultRelevanceThreshold);
    m.def("query_density", &query_density, py::arg("sample"));
}
