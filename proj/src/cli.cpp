#include "cnet/cli.hpp"

#include "cnet/errors.hpp"
#include "cnet/export.hpp"
#include "cnet/service.hpp"
#include "cnet/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace cnet {

namespace {

struct Options {
    std::string path;
    std::string closure = "none";
    std::string formula = to_string(SimilarityFormula::weighted_overlap_fraction);
    std::string weights_mode;
    std::string weights;
    std::string rule = "maximal";
    std::string format = "json";
    std::string delta = "0.25";
    std::string host = "127.0.0.1";
    std::optional<int> port;
    std::uint64_t seed = 42;
    std::optional<double> correlation;
};

std::vector<Rational> parse_weight_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
    if (out.empty()) throw ConfigError("--weights is empty");
    return out;
}

WeightVector weights_from(const Options& o, const ComparisonTable& table) {
    WeightMode mode = o.weights_mode.empty() ? (o.weights.empty() ? WeightMode::implied : WeightMode::expert)
                                             : parse_weight_mode(o.weights_mode);
    if (mode == WeightMode::expert && o.weights.empty())
        throw ConfigError("--weights-mode expert needs --weights");
    if (mode != WeightMode::expert && !o.weights.empty())
        throw ConfigError("--weights only applies to --weights-mode expert");
    std::vector<Rational> listed = o.weights.empty() ? std::vector<Rational>{} : parse_weight_list(o.weights);
    return resolve_weights(table, mode, listed);
}

int cmd_validate(const Options& o, std::ostream& out) {
    std::ifstream in(o.path, std::ios::binary);
    if (!in) throw IoError("cannot open " + o.path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Dataset d = parse_dataset(buffer.str());
    ValidationReport report = validate_dataset(d);
    if (!report.valid()) {
        out << report.to_string();
        return exit_invalid;
    }
    out << "valid: " << d.structure.nodes().size() << " nodes, " << d.structure.edges().size() << " edges, "
        << d.artifacts.size() << " artifacts, " << d.perspectives.size() << " perspectives\n";
    return exit_ok;
}

int cmd_matrix(const Options& o, std::ostream& out) {
    Dataset d = load_dataset_file(o.path);
    ComparisonTable table = comparison_table(d, parse_closure(o.closure));
    out << export_matrix(table.matrix(weights_from(o, table), parse_formula(o.formula)));
    return exit_ok;
}

int cmd_graph(const Options& o, std::ostream& out) {
    Dataset d = load_dataset_file(o.path);
    GraphRule rule = GraphRule::parse(o.rule);
    GraphFormat format = parse_graph_format(o.format);
    ComparisonTable table = comparison_table(d, parse_closure(o.closure));
    SimilarityGraph g = build_graph(table.matrix(weights_from(o, table), parse_formula(o.formula)), rule);
    out << export_graph(g, format);
    return exit_ok;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    Dataset d = load_dataset_file(o.path);
    ComparisonTable table = comparison_table(d, parse_closure(o.closure));
    out << export_sweep(sweep(table, parse_rational(o.delta), GraphRule::parse(o.rule), parse_formula(o.formula)));
    return exit_ok;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream& err) {
    int port = 8080;
    if (o.port) {
        port = *o.port;
    } else if (const char* env = std::getenv("CNET_PORT")) {
        port = std::atoi(env);
    }
    if (port < 0 || port > 65535) throw ConfigError("port out of range");
    AnalysisService service(load_dataset_file(o.path),
                            {parse_closure(o.closure), parse_formula(o.formula)});
    HttpServer server(service);
    int bound = server.start(o.host, port);
    out << "listening on http://" << o.host << ":" << bound << "\n" << std::flush;
    err << "snapshot " << service.state()->snapshot->version << "\n" << std::flush;
    server.wait();
    return exit_ok;
}

int cmd_generate(const Options& o, std::ostream& out) {
    SyntheticSpec spec = SyntheticSpec::defaults();
    if (o.correlation) {
        for (auto& p : spec.perspectives) p.correlation = *o.correlation;
    }
    out << save_dataset(gen_synthetic(o.seed, spec));
    return exit_ok;
}

void add_analysis_options(CLI::App* cmd, Options& o) {
    cmd->add_option("dataset", o.path, "Dataset document")->required();
    cmd->add_option("--closure", o.closure, "Attribute closure: none or ancestors");
    cmd->add_option("--formula", o.formula,
                    "Similarity formula: weighted-overlap-fraction, weighted-overlap-minus-divergence, "
                    "reliability-normalized");
}

void add_weight_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--weights-mode", o.weights_mode, "uniform, implied (default) or expert");
    cmd->add_option("--weights", o.weights, "Comma-separated expert weights, one per perspective in id order");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Perspective-weighted similarity analysis of artifacts", "cnet"};
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Check a dataset and report every violation");
    validate->add_option("dataset", o.path, "Dataset document")->required();

    auto* matrix = app.add_subcommand("matrix", "Print the pairwise similarity matrix as CSV");
    add_analysis_options(matrix, o);
    add_weight_options(matrix, o);

    auto* graph = app.add_subcommand("graph", "Print a similarity graph");
    add_analysis_options(graph, o);
    add_weight_options(graph, o);
    graph->add_option("--rule", o.rule, "maximal, knn:<n> or threshold:<t>");
    graph->add_option("--format", o.format, "dot, graphml or json");

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep the weight simplex and report graph regions");
    add_analysis_options(sweep_cmd, o);
    sweep_cmd->add_option("--delta", o.delta, "Grid step, must divide 1");
    sweep_cmd->add_option("--rule", o.rule, "maximal, knn:<n> or threshold:<t>");

    auto* serve = app.add_subcommand("serve", "Serve the HTTP API for one dataset");
    add_analysis_options(serve, o);
    serve->add_option("--host", o.host, "Bind address");
    serve->add_option("--port", o.port, "Port (default: CNET_PORT or 8080; 0 picks a free port)");

    auto* generate = app.add_subcommand("generate", "Print a synthetic dataset");
    generate->add_option("--seed", o.seed, "Generator seed");
    generate->add_option("--correlation", o.correlation, "Within-group correlation for every perspective");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (validate->parsed()) return cmd_validate(o, out);
        if (matrix->parsed()) return cmd_matrix(o, out);
        if (graph->parsed()) return cmd_graph(o, out);
        if (sweep_cmd->parsed()) return cmd_sweep(o, out);
        if (serve->parsed()) return cmd_serve(o, out, err);
        if (generate->parsed()) return cmd_generate(o, out);
    } catch (const ValidationError& e) {
        err << "cnet: invalid dataset: " << e.what() << "\n";
        return exit_invalid;
    } catch (const ParseError& e) {
        err << "cnet: " << e.what() << "\n";
        return exit_usage;
    } catch (const IoError& e) {
        err << "cnet: " << e.what() << "\n";
        return exit_usage;
    } catch (const ConfigError& e) {
        err << "cnet: usage: " << e.what() << "\n";
        return exit_usage;
    } catch (const DataError& e) {
        err << "cnet: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_usage;
}

} // namespace cnet
