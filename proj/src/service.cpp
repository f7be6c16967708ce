#include "cnet/service.hpp"

#include "cnet/errors.hpp"
#include "cnet/export.hpp"

#include <httplib.h>
#include <json.hpp>

namespace cnet {

namespace {

using nlohmann::json;

// Raised inside handlers; turned into a 4xx body.
struct RequestError {
    int status;
    std::string code;
    std::string message;
};

std::shared_ptr<const Snapshot> make_snapshot(Dataset dataset, const ServiceOptions& options,
                                              std::uint64_t generation) {
    ComparisonTable table = comparison_table(dataset, options.closure);
    ImpliedWeights implied = table.implied_weights();
    std::string version = std::to_string(generation) + "-" + dataset_digest(dataset);
    return std::make_shared<const Snapshot>(
        Snapshot{std::move(dataset), std::move(table), std::move(implied), std::move(version)});
}

Rational json_rational(const json& v, const std::string& what) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return Rational(v.get<std::uint64_t>());
    // Shortest round-trip text, so 0.1 becomes exactly 1/10.
    if (v.is_number_float()) return parse_rational(v.dump());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw RequestError{400, "bad_request", what + " must be a number"};
}

ApiResponse json_response(int status, json body, const std::string& snapshot) {
    body["snapshot"] = snapshot;
    return {status, body.dump(2) + "\n", "application/json", snapshot};
}

ApiResponse error_response(const RequestError& e, const std::string& snapshot) {
    return json_response(e.status, {{"error", {{"code", e.code}, {"message", e.message}}}}, snapshot);
}

json parse_body(const std::string& body) {
    try {
        json doc = json::parse(body);
        if (!doc.is_object()) throw RequestError{400, "bad_request", "request body must be a JSON object"};
        return doc;
    } catch (const json::parse_error& e) {
        throw RequestError{400, "malformed_json", e.what()};
    }
}

GraphRule rule_from(const std::string& rule, const std::string* n, const std::string* t) {
    if (rule.find(':') != std::string::npos || rule == "maximal") return GraphRule::parse(rule);
    if (rule == "knn") {
        if (!n) throw RequestError{400, "bad_rule", "rule=knn needs parameter n"};
        return GraphRule::parse("knn:" + *n);
    }
    if (rule == "threshold") {
        if (!t) throw RequestError{400, "bad_rule", "rule=threshold needs parameter t"};
        return GraphRule::parse("threshold:" + *t);
    }
    throw RequestError{400, "bad_rule", "unknown rule '" + rule + "'"};
}

json dataset_summary(const Snapshot& s, const ServiceOptions& options) {
    const Dataset& d = s.dataset;
    json artifacts = json::array();
    std::set<std::string> groups, eras;
    for (const auto& a : d.artifacts) {
        artifacts.push_back({{"id", a.id}, {"group", a.group}, {"era", a.era}, {"size", a.attributes.size()}});
        groups.insert(a.group);
        eras.insert(a.era);
    }
    json perspectives = json::array();
    for (const auto& p : d.perspectives)
        perspectives.push_back({{"id", p.id}, {"name", p.name}, {"size", p.attributes.size()}});
    return {{"metadata", d.metadata},
            {"artifacts", std::move(artifacts)},
            {"artifact_count", d.artifacts.size()},
            {"groups", groups},
            {"eras", eras},
            {"perspectives", std::move(perspectives)},
            {"perspective_count", d.perspectives.size()},
            {"node_count", d.structure.nodes().size()},
            {"closure", to_string(options.closure)},
            {"formula", to_string(options.formula)}};
}

json weights_summary(const SessionState& st) {
    json ids = json::array();
    for (const auto& p : st.snapshot->table.perspectives()) ids.push_back(p.id);
    return {{"weights", weights_to_json(st.weights)},
            {"mode", to_string(st.mode)},
            {"perspectives", std::move(ids)},
            {"implied_uniform_fallback", st.snapshot->implied.uniform_fallback}};
}

} // namespace

const char* to_string(WeightMode mode) {
    switch (mode) {
    case WeightMode::uniform: return "uniform";
    case WeightMode::implied: return "implied";
    case WeightMode::expert: return "expert";
    }
    return "unknown";
}

WeightMode parse_weight_mode(const std::string& text) {
    if (text == "uniform") return WeightMode::uniform;
    if (text == "implied") return WeightMode::implied;
    if (text == "expert") return WeightMode::expert;
    throw ConfigError("unknown weights mode '" + text + "' (expected uniform, implied or expert)");
}

WeightVector resolve_weights(const ComparisonTable& table, WeightMode mode, const std::vector<Rational>& expert) {
    switch (mode) {
    case WeightMode::uniform: return weights_uniform(table.perspectives());
    case WeightMode::implied: return table.implied_weights().weights;
    case WeightMode::expert:
        if (expert.size() != table.perspectives().size())
            throw ConfigError("expected " + std::to_string(table.perspectives().size()) + " weights, got " +
                              std::to_string(expert.size()));
        return WeightVector::normalized(expert);
    }
    throw ConfigError("unknown weights mode");
}

AnalysisService::AnalysisService(Dataset dataset, ServiceOptions options) : options_(options) {
    install(std::move(dataset));
}

void AnalysisService::install(Dataset dataset) {
    std::uint64_t generation;
    {
        std::lock_guard lock(mutex_);
        generation = ++generation_;
    }
    auto snapshot = make_snapshot(std::move(dataset), options_, generation);
    auto state = std::make_shared<const SessionState>(
        SessionState{snapshot, snapshot->implied.weights, WeightMode::implied});
    std::lock_guard lock(mutex_);
    state_ = std::move(state);
}

std::shared_ptr<const SessionState> AnalysisService::state() const {
    std::lock_guard lock(mutex_);
    return state_;
}

ApiResponse AnalysisService::put_weights(const std::string& body) {
    json doc = parse_body(body);
    std::vector<Rational> values;
    if (doc.contains("weights")) {
        if (!doc["weights"].is_array()) throw RequestError{400, "bad_request", "weights must be an array"};
        for (const auto& w : doc["weights"]) values.push_back(json_rational(w, "each weight"));
    }
    WeightMode mode = WeightMode::expert;
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) throw RequestError{400, "bad_request", "mode must be a string"};
        mode = parse_weight_mode(doc["mode"].get<std::string>());
    } else if (!doc.contains("weights")) {
        throw RequestError{400, "bad_request", "expected weights or mode"};
    }

    std::lock_guard lock(mutex_);
    const auto& snapshot = state_->snapshot;
    if (doc.contains("snapshot") && doc["snapshot"] != snapshot->version)
        throw RequestError{409, "stale_snapshot", "weights were computed against another dataset snapshot"};
    if (mode == WeightMode::expert && values.size() != snapshot->table.perspectives().size())
        throw RequestError{400, "weight_count_mismatch",
                           "expected " + std::to_string(snapshot->table.perspectives().size()) + " weights, got " +
                               std::to_string(values.size())};
    auto next = std::make_shared<const SessionState>(
        SessionState{snapshot, resolve_weights(snapshot->table, mode, values), mode});
    state_ = next;
    return json_response(200, weights_summary(*next), snapshot->version);
}

ApiResponse AnalysisService::handle(const std::string& method, const std::string& path,
                                    const std::map<std::string, std::string>& query, const std::string& body) {
    std::shared_ptr<const SessionState> st = state();
    const std::string& version = st->snapshot->version;
    auto param = [&](const char* key) -> const std::string* {
        auto it = query.find(key);
        return it == query.end() ? nullptr : &it->second;
    };
    auto require = [&](const char* expected) {
        if (method != expected)
            throw RequestError{405, "method_not_allowed", path + " does not accept " + method};
    };

    try {
        if (path == "/api/health") {
            require("GET");
            return json_response(200, {{"status", "ok"}}, version);
        }
        if (path == "/api/dataset") {
            require("GET");
            return json_response(200, dataset_summary(*st->snapshot, options_), version);
        }
        if (path == "/api/weights") {
            if (method == "PUT") return put_weights(body);
            require("GET");
            return json_response(200, weights_summary(*st), version);
        }
        if (path == "/api/matrix") {
            require("GET");
            return json_response(200, matrix_to_json(st->snapshot->table.matrix(st->weights, options_.formula)),
                                 version);
        }
        if (path == "/api/graph") {
            require("GET");
            const std::string* rule_text = param("rule");
            GraphRule rule = rule_from(rule_text ? *rule_text : "maximal", param("n"), param("t"));
            const std::string* format_text = param("format");
            GraphFormat format = parse_graph_format(format_text ? *format_text : "json");
            SimilarityGraph g = build_graph(st->snapshot->table.matrix(st->weights, options_.formula), rule);
            if (format == GraphFormat::json) return json_response(200, graph_to_json(g), version);
            return {200, export_graph(g, format),
                    format == GraphFormat::dot ? "text/vnd.graphviz" : "application/graphml+xml", version};
        }
        if (path == "/api/sweep") {
            require("POST");
            json doc = parse_body(body.empty() ? "{}" : body);
            Rational delta = doc.contains("delta") ? json_rational(doc["delta"], "delta") : Rational(1, 4);
            std::string n = doc.contains("n") ? doc["n"].dump() : "";
            std::string t;
            if (doc.contains("t")) t = doc["t"].is_string() ? doc["t"].get<std::string>() : doc["t"].dump();
            std::string rule_text = doc.value("rule", std::string("maximal"));
            GraphRule rule = rule_from(rule_text, doc.contains("n") ? &n : nullptr, doc.contains("t") ? &t : nullptr);
            return json_response(200, sweep_to_json(sweep(st->snapshot->table, delta, rule, options_.formula)),
                                 version);
        }
        throw RequestError{404, "not_found", "no endpoint " + path};
    } catch (const RequestError& e) {
        return error_response(e, version);
    } catch (const ConfigError& e) {
        return error_response({400, "bad_request", e.what()}, version);
    } catch (const DataError& e) {
        return error_response({422, "data_error", e.what()}, version);
    }
}

HttpServer::HttpServer(AnalysisService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query.emplace(k, v);
        ApiResponse r = service_.handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_header("X-Snapshot-Version", r.snapshot);
        res.set_content(r.body, r.content_type.c_str());
    };
    // The library default adds SO_REUSEPORT, which lets a second server share
    // a busy port instead of failing to bind.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    server_->Get(".*", dispatch);
    server_->Put(".*", dispatch);
    server_->Post(".*", dispatch);
    server_->Delete(".*", dispatch);
    server_->Patch(".*", dispatch);
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = server_->bind_to_any_port(host.c_str());
        if (bound < 0) throw IoError("cannot bind " + host);
    } else if (!server_->bind_to_port(host.c_str(), port)) {
        throw IoError("cannot bind " + host + ":" + std::to_string(port));
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void HttpServer::wait() {
    if (thread_.joinable()) thread_.join();
}

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

} // namespace cnet
