// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "windtunnel/corpus_io.hpp"
#include "windtunnel/corpus_reconstructor.hpp"
#include "windtunnel/engine.hpp"
#include "windtunnel/eval_metrics.hpp"
#include "windtunnel/graph_builder.hpp"
#include "windtunnel/graph_sampler.hpp"
#include "windtunnel/hashing.hpp"
#include "windtunnel/powerlaw.hpp"

namespace windtunnel::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path + " for hashing");
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                 &EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return hex.str();
}

namespace {

struct Options {
    // engine
    std::size_t workers = 0;
    std::size_t memory_budget = std::size_t{512} << 20;
    std::string tmp_dir;

    // inputs
    std::string queries;
    std::string corpus;
    std::string qrels;
    std::string qrels_format = "trec-qrels";
    std::string run;
    std::string edges;
    std::string plan;
    std::string clusters;
    std::string sample_dir;

    // graph
    std::optional<double> tau;
    std::optional<double> top_fraction;
    std::size_t max_query_fanout = kDefaultMaxQueryFanout;

    // sampling
    std::uint32_t rounds = kDefaultRounds;
    std::uint64_t seed = 0;
    std::optional<double> scale;
    std::optional<std::uint64_t> target_entities;
    std::optional<std::uint64_t> total_entities;
    std::size_t k = 3;
    bool allow_empty = false;

    // powerlaw / eval
    double tol = 1e-8;
    std::uint32_t max_iter = 500;
    std::string hist;
    double rel_threshold = kDefaultRelevanceThreshold;

    std::string out;
};

class Manifest {
public:
    Manifest(std::string subcommand, const std::vector<std::string>& args,
             const CLI::App& sub)
        : start_(std::chrono::steady_clock::now()) {
        doc_["tool"] = "windtunnel";
        doc_["tool_version"] = kToolVersion;
        doc_["subcommand"] = std::move(subcommand);
        doc_["argv"] = args;
        json flags = json::object();
        for (const auto* opt : sub.get_options()) {
            auto name = opt->get_name(false, true);
            if (name.empty() || name == "--help" || name == "-h,--help") {
                continue;
            }
            auto key = opt->get_single_name();
            if (opt->count() > 0) {
                auto results = opt->results();
                flags[key] = results.size() == 1 ? json(results.front()) : json(results);
            } else if (!opt->get_default_str().empty()) {
                flags[key] = opt->get_default_str();
            } else {
                flags[key] = nullptr;
            }
        }
        doc_["flags"] = std::move(flags);
        doc_["inputs"] = json::object();
        doc_["outputs"] = json::object();
        doc_["counts"] = json::object();
        doc_["warnings"] = json::array();
    }

    void input(const std::string& path) {
        if (!path.empty()) {
            doc_["inputs"][path] = file_digest(path);
        }
    }
    void output(const fs::path& path) { doc_["outputs"][path.string()] = file_digest(path); }
    void count(const std::string& name, std::uint64_t n) { doc_["counts"][name] = n; }
    void set(const std::string& name, json value) { doc_[name] = std::move(value); }
    void warn(const std::string& message, std::ostream& err) {
        err << "warning: " << message << '\n';
        doc_["warnings"].push_back(message);
    }

    void write(const fs::path& path) {
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
        doc_["wall_clock_seconds"] = elapsed.count();
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + path.string());
        }
        out << doc_.dump(2) << '\n';
    }

private:
    json doc_;
    std::chrono::steady_clock::time_point start_;
};

void write_json(const json& doc, const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

fs::path manifest_beside(const fs::path& file) {
    return fs::path(file.string() + ".manifest.json");
}

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) {
        fs::create_directories(file.parent_path());
    }
}

Engine make_engine(const Options& o) {
    EngineConfig config;
    config.workers = o.workers;
    config.memory_budget = o.memory_budget;
    config.tmp_dir = o.tmp_dir;
    return Engine(config);
}

std::pair<fs::path, fs::path> split_pair(const std::string& value) {
    auto comma = value.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == value.size() ||
        value.find(',', comma + 1) != std::string::npos) {
        throw CLI::ValidationError("--out", "expected 'clusters.tsv,plan.tsv'");
    }
    return {value.substr(0, comma), value.substr(comma + 1)};
}

struct GraphStage {
    std::vector<AffinityEdge> edges;
    double tau = kNoThreshold;
    std::size_t kept_qrels = 0;
};

GraphStage run_graph_stage(const Engine& engine, const Options& o,
                           const std::vector<QRelRecord>& qrels, Manifest& manifest,
                           std::ostream& err) {
    GraphStage g;
    std::string rule = "none";
    if (o.tau) {
        g.tau = *o.tau;
        rule = "tau";
    } else if (o.top_fraction) {
        if (!qrels.empty()) {
            g.tau = percentile_cutoff(qrels, *o.top_fraction);
        }
        rule = "top-fraction";
    }
    auto kept = filter_qrels(qrels, g.tau);
    g.kept_qrels = kept.size();
    GraphBuildOptions options;
    options.max_query_fanout = o.max_query_fanout;
    auto built = build_affinity_edges(engine, kept, options);
    validate_edges(built.edges, g.tau);
    for (const auto& q : built.dropped_queries) {
        manifest.warn("query '" + q + "' exceeds --max-query-fanout " +
                          std::to_string(o.max_query_fanout) + " and was dropped",
                      err);
    }
    manifest.set("filter_rule", rule);
    manifest.set("effective_tau", std::isfinite(g.tau) ? json(g.tau) : json("-inf"));
    manifest.set("fanout_dropped_queries", built.dropped_queries);
    manifest.count("qrels", qrels.size());
    manifest.count("qrels_after_filter", kept.size());
    manifest.count("candidate_pairs", built.candidate_pairs);
    manifest.count("edges", built.edges.size());
    g.edges = std::move(built.edges);
    return g;
}

struct SampleStage {
    std::vector<ClusterAssignment> clusters;
    SamplePlan plan;
};

SampleStage run_sample_stage(const Engine& engine, const Options& o,
                             const std::vector<AffinityEdge>& edges, std::uint64_t total,
                             Manifest& manifest, std::ostream& err) {
    SampleStage s;
    auto propagated = propagate_labels(engine, edges, o.rounds);
    s.clusters = extract_clusters(engine, propagated.labels);

    double scale = 1.0;
    if (o.scale) {
        scale = *o.scale;
    } else if (o.target_entities) {
        scale = calibrate_scale(s.clusters, total, *o.target_entities);
    }
    auto stage_seed = derive_seed(o.seed, "sample");
    s.plan = sample_clusters(s.clusters, total, stage_seed, scale);
    s.plan.target_entities = o.target_entities;

    std::uint64_t selected_entities = 0;
    std::uint64_t selected_clusters = 0;
    for (const auto& d : s.plan.decisions) {
        if (d.selected) {
            selected_entities += d.size;
            ++selected_clusters;
        }
    }
    if (propagated.final_change_fraction > 0.0) {
        manifest.warn("label propagation did not settle: " +
                          format_double(propagated.final_change_fraction) +
                          " of nodes changed label in the final round",
                      err);
    }
    manifest.set("seed", o.seed);
    manifest.set("sample_seed", stage_seed);
    manifest.set("scale", scale);
    manifest.set("total_entities", total);
    manifest.set("final_round_label_change_fraction", propagated.final_change_fraction);
    manifest.set("expected_sample_entities", expected_sample_size(s.clusters, total, scale));
    manifest.count("graph_nodes", propagated.labels.size());
    manifest.count("clusters", s.clusters.size());
    manifest.count("selected_clusters", selected_clusters);
    manifest.count("selected_entities", selected_entities);
    return s;
}

void record_sample(const CorpusSample& sample, Manifest& manifest) {
    auto composition = sample_composition(sample);
    manifest.count("sample_queries", sample.queries.size());
    manifest.count("sample_entities", sample.entities.size());
    manifest.count("sample_qrels", sample.qrels.size());
    manifest.count("sample_judged_entities", composition.judged_entities);
    manifest.count("sample_unjudged_entities", composition.unjudged_entities);
}

void write_sample_outputs(const CorpusSample& sample, const fs::path& dir, bool allow_empty,
                          Manifest& manifest) {
    write_sample(sample, dir, allow_empty);
    for (const char* name : {"queries.tsv", "corpus.tsv", "qrels.tsv"}) {
        manifest.output(dir / name);
    }
    record_sample(sample, manifest);
}

json density_json(const DensityReport& d) {
    return json{{"definition", "distinct_queries / distinct_entities"},
                {"query_count", d.query_count},
                {"entity_count", d.entity_count},
                {"qrel_count", d.qrel_count},
                {"rho_q", d.rho_q}};
}

json precision_json(const PrecisionReport& r, double threshold) {
    json per_query = json::object();
    for (const auto& [q, p] : r.per_query) {
        per_query[q] = p;
    }
    return json{{"k", r.k},
                {"relevance_threshold", threshold},
                {"judged_queries", r.judged_queries},
                {"mean", r.mean},
                {"per_query", std::move(per_query)}};
}

json fit_json(const PowerLawFit& fit) {
    return json{{"rho", fit.rho},
                {"gamma", fit.gamma},
                {"std_error", std::isfinite(fit.std_error) ? json(fit.std_error) : json(nullptr)},
                {"log_likelihood", fit.log_likelihood},
                {"iterations", fit.iterations},
                {"n", fit.n},
                {"boundary_warning", fit.boundary_warning}};
}

// Subcommand bodies -------------------------------------------------------

void cmd_build_graph(const Options& o, Manifest& m, std::ostream& err) {
    auto engine = make_engine(o);
    m.input(o.qrels);
    auto qrels = read_qrels(o.qrels, parse_qrels_format(o.qrels_format));
    auto graph = run_graph_stage(engine, o, qrels, m, err);
    ensure_parent(o.out);
    write_edges(graph.edges, o.out);
    m.output(o.out);
    m.write(manifest_beside(o.out));
}

void cmd_sample(const Options& o, Manifest& m, std::ostream& err) {
    auto engine = make_engine(o);
    auto [clusters_path, plan_path] = split_pair(o.out);
    m.input(o.edges);
    auto edges = read_edges(o.edges);
    auto s = run_sample_stage(engine, o, edges, *o.total_entities, m, err);
    ensure_parent(clusters_path);
    ensure_parent(plan_path);
    write_clusters(s.clusters, clusters_path);
    write_plan(s.plan, plan_path);
    m.output(clusters_path);
    m.output(plan_path);
    m.write(manifest_beside(plan_path));
}

void cmd_reconstruct(const Options& o, Manifest& m, std::ostream&) {
    auto engine = make_engine(o);
    for (const auto* p : {&o.plan, &o.clusters, &o.queries, &o.corpus, &o.qrels}) {
        m.input(*p);
    }
    auto plan = read_plan(o.plan);
    auto clusters = read_clusters(o.clusters);
    auto queries = read_queries(o.queries);
    auto corpus = read_corpus(o.corpus);
    auto qrels = read_qrels(o.qrels, parse_qrels_format(o.qrels_format));
    auto sample = reconstruct(engine, plan, clusters, queries, corpus, qrels);
    write_sample_outputs(sample, o.out, o.allow_empty, m);
    m.write(fs::path(o.out) / "manifest.json");
}

void cmd_baseline(const Options& o, Manifest& m, std::ostream&) {
    auto engine = make_engine(o);
    for (const auto* p : {&o.queries, &o.corpus, &o.qrels}) {
        m.input(*p);
    }
    auto queries = read_queries(o.queries);
    auto corpus = read_corpus(o.corpus);
    auto qrels = read_qrels(o.qrels, parse_qrels_format(o.qrels_format));
    auto stage_seed = derive_seed(o.seed, "baseline");
    auto sample = uniform_sample(engine, corpus, queries, qrels, o.k, stage_seed);
    m.set("seed", o.seed);
    m.set("baseline_seed", stage_seed);
    write_sample_outputs(sample, o.out, o.allow_empty, m);
    m.write(fs::path(o.out) / "manifest.json");
}

void cmd_fit_powerlaw(const Options& o, Manifest& m, std::ostream& err) {
    m.input(o.edges);
    auto edges = read_edges(o.edges);
    std::vector<std::uint64_t> degrees;
    for (const auto& [node, d] : node_degrees(edges)) {
        degrees.push_back(d);
    }
    auto sample = DegreeSample::from_values(degrees);
    auto fit = fit_yule_simon(sample, o.tol, o.max_iter);
    if (fit.boundary_warning) {
        m.warn("Yule-Simon fit hit the rho search bound (rho = " + format_double(fit.rho) + ")",
               err);
    }
    write_json(fit_json(fit), o.out);
    m.output(o.out);
    if (!o.hist.empty()) {
        ensure_parent(o.hist);
        export_histogram(sample, fit, o.hist);
        m.output(o.hist);
    }
    m.count("nodes", sample.size());
    m.count("edges", edges.size());
    m.write(manifest_beside(o.out));
}

void cmd_eval(const Options& o, Manifest& m, std::ostream&) {
    m.input(o.run);
    m.input(o.qrels);
    auto run = read_run(o.run);
    auto qrels = read_qrels(o.qrels, parse_qrels_format(o.qrels_format));
    auto report = precision_at_k(run, qrels, o.k, o.rel_threshold);
    write_json(precision_json(report, o.rel_threshold), o.out);
    m.output(o.out);
    m.count("run_rows", run.size());
    m.count("judged_queries", report.judged_queries);
    m.write(manifest_beside(o.out));
}

void cmd_density(const Options& o, Manifest& m, std::ostream&) {
    auto dir = fs::path(o.sample_dir);
    for (const char* name : {"queries.tsv", "corpus.tsv", "qrels.tsv"}) {
        m.input((dir / name).string());
    }
    auto sample = read_sample(dir);
    validate_sample(sample);
    write_json(density_json(query_density(sample)), o.out);
    m.output(o.out);
    m.write(manifest_beside(o.out));
}

void cmd_pipeline(const Options& o, Manifest& m, std::ostream& err) {
    auto engine = make_engine(o);
    auto dir = fs::path(o.out);
    fs::create_directories(dir);
    for (const auto* p : {&o.queries, &o.corpus, &o.qrels}) {
        m.input(*p);
    }
    auto queries = read_queries(o.queries);
    auto corpus = read_corpus(o.corpus);
    auto qrels = read_qrels(o.qrels, parse_qrels_format(o.qrels_format));

    Options effective = o;
    if (!effective.tau && !effective.top_fraction) {
        effective.top_fraction = 0.5;
    }
    auto graph = run_graph_stage(engine, effective, qrels, m, err);
    write_edges(graph.edges, dir / "edges.tsv");
    m.output(dir / "edges.tsv");

    auto total = o.total_entities.value_or(corpus.size());
    auto s = run_sample_stage(engine, effective, graph.edges, total, m, err);
    write_clusters(s.clusters, dir / "clusters.tsv");
    write_plan(s.plan, dir / "plan.tsv");
    m.output(dir / "clusters.tsv");
    m.output(dir / "plan.tsv");

    auto sample = reconstruct(engine, s.plan, s.clusters, queries, corpus, qrels);
    write_sample_outputs(sample, dir, o.allow_empty, m);
    if (!sample.entities.empty()) {
        write_json(density_json(query_density(sample)), dir / "density.json");
        m.output(dir / "density.json");
    }
    if (!o.run.empty()) {
        m.input(o.run);
        auto report = precision_at_k(read_run(o.run), sample.qrels, o.k, o.rel_threshold);
        write_json(precision_json(report, o.rel_threshold), dir / "report.json");
        m.output(dir / "report.json");
    }
    m.write(dir / "manifest.json");
}

void add_engine_flags(CLI::App* sub, Options& o) {
    sub->add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)")
        ->capture_default_str();
    sub->add_option("--memory-budget", o.memory_budget,
                    "Shuffle bytes held in memory before spilling")
        ->capture_default_str();
    sub->add_option("--tmp-dir", o.tmp_dir, "Directory for spill files");
}

void add_qrels_flags(CLI::App* sub, Options& o) {
    sub->add_option("--qrels", o.qrels, "Relevance judgments")->required();
    sub->add_option("--qrels-format", o.qrels_format, "trec-qrels | scored-tsv")
        ->capture_default_str()
        ->check(CLI::IsMember({"trec-qrels", "scored-tsv"}));
}

void add_filter_flags(CLI::App* sub, Options& o) {
    auto* tau = sub->add_option("--tau", o.tau, "Keep qrels with score > tau");
    auto* top = sub->add_option("--top-fraction", o.top_fraction,
                                "Keep the top fraction of qrels by score")
                    ->check(CLI::Range(0.0, 1.0));
    tau->excludes(top);
    sub->add_option("--max-query-fanout", o.max_query_fanout,
                    "Drop queries judged for more entities than this")
        ->capture_default_str();
}

void add_sampling_flags(CLI::App* sub, Options& o, bool total_required) {
    sub->add_option("--rounds", o.rounds, "Label propagation rounds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Run seed")->capture_default_str();
    auto* scale = sub->add_option("--scale", o.scale, "Inclusion probability scale factor")
                      ->check(CLI::PositiveNumber);
    auto* target = sub->add_option("--target-entities", o.target_entities,
                                   "Calibrate the scale to this expected sample size")
                       ->check(CLI::PositiveNumber);
    scale->excludes(target);
    auto* total = sub->add_option("--total-entities", o.total_entities,
                                  "Total corpus entity count N")
                      ->check(CLI::PositiveNumber);
    if (total_required) {
        total->required();
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Community-preserving sampling of retrieval corpora", "windtunnel"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Options o;

    auto* build = app.add_subcommand("build-graph", "Build the shared-query affinity graph");
    add_engine_flags(build, o);
    add_qrels_flags(build, o);
    add_filter_flags(build, o);
    build->add_option("--out", o.out, "Edge file")->required();

    auto* sample = app.add_subcommand("sample", "Label propagation and cluster sampling");
    add_engine_flags(sample, o);
    sample->add_option("--edges", o.edges, "Edge file")->required();
    add_sampling_flags(sample, o, true);
    sample->add_option("--out", o.out, "clusters.tsv,plan.tsv")->required();

    auto* recon = app.add_subcommand("reconstruct", "Join selected clusters back to the corpus");
    add_engine_flags(recon, o);
    recon->add_option("--plan", o.plan, "Plan file")->required();
    recon->add_option("--clusters", o.clusters, "Cluster file")->required();
    recon->add_option("--queries", o.queries, "Queries TSV")->required();
    recon->add_option("--corpus", o.corpus, "Corpus TSV")->required();
    add_qrels_flags(recon, o);
    recon->add_option("--out", o.out, "Output directory")->required();
    recon->add_flag("--allow-empty", o.allow_empty, "Write three empty files for an empty sample");

    auto* base = app.add_subcommand("baseline", "Uniform random entity sample");
    add_engine_flags(base, o);
    base->add_option("--k", o.k, "Number of entities")->required()->check(CLI::PositiveNumber);
    base->add_option("--seed", o.seed, "Run seed")->capture_default_str();
    base->add_option("--queries", o.queries, "Queries TSV")->required();
    base->add_option("--corpus", o.corpus, "Corpus TSV")->required();
    add_qrels_flags(base, o);
    base->add_option("--out", o.out, "Output directory")->required();
    base->add_flag("--allow-empty", o.allow_empty, "Write three empty files for an empty sample");

    auto* fit = app.add_subcommand("fit-powerlaw", "Fit a Yule-Simon law to node degrees");
    fit->add_option("--edges", o.edges, "Edge file")->required();
    fit->add_option("--out", o.out, "fit.json")->required();
    fit->add_option("--hist", o.hist, "Histogram TSV for plotting");
    fit->add_option("--tol", o.tol, "EM tolerance")->capture_default_str();
    fit->add_option("--max-iter", o.max_iter, "EM iteration limit")->capture_default_str();

    auto* eval = app.add_subcommand("eval", "precision@k of a TREC run");
    eval->add_option("--run", o.run, "TREC run file")->required();
    add_qrels_flags(eval, o);
    eval->add_option("--k", o.k, "Cutoff")->capture_default_str()->check(CLI::PositiveNumber);
    eval->add_option("--rel-threshold", o.rel_threshold, "Minimum relevant qrel score")
        ->capture_default_str();
    eval->add_option("--out", o.out, "report.json")->required();

    auto* density = app.add_subcommand("density", "Query density of a sample directory");
    density->add_option("--sample", o.sample_dir, "Sample directory")->required();
    density->add_option("--out", o.out, "density.json")->required();

    auto* pipeline = app.add_subcommand("pipeline", "build-graph, sample and reconstruct");
    add_engine_flags(pipeline, o);
    pipeline->add_option("--queries", o.queries, "Queries TSV")->required();
    pipeline->add_option("--corpus", o.corpus, "Corpus TSV")->required();
    add_qrels_flags(pipeline, o);
    add_filter_flags(pipeline, o);
    add_sampling_flags(pipeline, o, false);
    pipeline->add_option("--k", o.k, "Cutoff for --run evaluation")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    pipeline->add_option("--run", o.run, "Optional TREC run to evaluate on the sample");
    pipeline->add_option("--rel-threshold", o.rel_threshold, "Minimum relevant qrel score")
        ->capture_default_str();
    pipeline->add_option("--out", o.out, "Output directory")->required();
    pipeline->add_flag("--allow-empty", o.allow_empty,
                       "Write three empty files for an empty sample");

    if (args.empty()) {
        err << app.help();
        return kExitUsage;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    auto* chosen = app.get_subcommands().front();
    const auto name = chosen->get_name();
    try {
        Manifest manifest(name, args, *chosen);
        if (name == "build-graph") {
            cmd_build_graph(o, manifest, err);
        } else if (name == "sample") {
            cmd_sample(o, manifest, err);
        } else if (name == "reconstruct") {
            cmd_reconstruct(o, manifest, err);
        } else if (name == "baseline") {
            cmd_baseline(o, manifest, err);
        } else if (name == "fit-powerlaw") {
            cmd_fit_powerlaw(o, manifest, err);
        } else if (name == "eval") {
            cmd_eval(o, manifest, err);
        } else if (name == "density") {
            cmd_density(o, manifest, err);
        } else if (name == "pipeline") {
            cmd_pipeline(o, manifest, err);
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n\n" << chosen->help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

} // namespace windtunnel::cli
