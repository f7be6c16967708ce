#include <gtest/gtest.h>

#include "cnet/cli.hpp"
#include "cnet/dataset_io.hpp"
#include "cnet/errors.hpp"
#include "cnet/export.hpp"
#include "cnet/service.hpp"
#include "cnet/synthetic.hpp"

#include "support/graph_parsers.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

using namespace cnet;
using nlohmann::json;

namespace {

Dataset fixture(const std::string& name) {
    return load_dataset_file(std::string(CNET_FIXTURE_DIR) + "/" + name);
}

json body_of(const ApiResponse& r) {
    return json::parse(r.body);
}

json get(AnalysisService& s, const std::string& path, const std::map<std::string, std::string>& query = {}) {
    auto r = s.handle("GET", path, query, "");
    EXPECT_EQ(r.status, 200) << path << ": " << r.body;
    return body_of(r);
}

ApiResponse put_weights(AnalysisService& s, const json& body) {
    return s.handle("PUT", "/api/weights", {}, body.dump());
}

json without_snapshot(json doc) {
    doc.erase("snapshot");
    return doc;
}

std::string run(std::vector<std::string> args, int* code = nullptr) {
    std::vector<const char*> argv{"cnet"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code) *code = rc;
    return out.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

} // namespace

TEST(Service, Health) {
    AnalysisService s(fixture("split.json"));
    auto doc = get(s, "/api/health");
    EXPECT_EQ(doc["status"], "ok");
    EXPECT_EQ(doc["snapshot"], s.state()->snapshot->version);
}

TEST(Service, DatasetSummaryOfDefaultSynthetic) {
    AnalysisService s(gen_synthetic(42));
    auto doc = get(s, "/api/dataset");
    EXPECT_EQ(doc["perspective_count"], 2);
    EXPECT_EQ(doc["artifact_count"], 15);
    EXPECT_EQ(doc["perspectives"][0]["id"], "physical");
    EXPECT_EQ(doc["perspectives"][0]["size"], 80);
    EXPECT_EQ(doc["groups"].size(), 6u);
    EXPECT_EQ(doc["eras"], json({"archaeological", "ethnographic"}));
    EXPECT_EQ(doc["closure"], "none");
}

TEST(Service, DefaultWeightsAreImplied) {
    AnalysisService s(fixture("split.json"));
    auto doc = get(s, "/api/weights");
    EXPECT_EQ(doc["mode"], "implied");
    EXPECT_EQ(doc["perspectives"], json({"physical", "symbolism"}));
    EXPECT_NEAR(doc["weights"][0].get<double>(), 2.0 / 3.0, 1e-15);
}

TEST(Service, PutWeightsThenGraphMatchesCli) {
    Dataset d = gen_synthetic(42);
    std::string path = write_temp("service_synthetic.json", save_dataset(d));
    AnalysisService s(d);
    auto r = put_weights(s, {{"weights", {0.5, 0.5}}});
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_EQ(body_of(r)["mode"], "expert");
    auto doc = get(s, "/api/graph");
    std::string cli = run({"graph", path, "--weights", "0.5,0.5"});
    EXPECT_EQ(without_snapshot(doc), json::parse(cli));
}

TEST(Service, ExpertWeightsAreNormalized) {
    AnalysisService s(fixture("split.json"));
    ASSERT_EQ(put_weights(s, {{"weights", {2, 6}}}).status, 200);
    EXPECT_EQ(s.state()->weights.values(), (std::vector<Rational>{Rational(1, 4), Rational(3, 4)}));
    ASSERT_EQ(put_weights(s, {{"mode", "uniform"}}).status, 200);
    EXPECT_EQ(get(s, "/api/weights")["mode"], "uniform");
    EXPECT_EQ(s.state()->weights.values(), (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
}

TEST(Service, WrongWeightCountIsRejected) {
    AnalysisService s(gen_synthetic(42));
    auto before = s.state()->weights;
    auto r = put_weights(s, {{"weights", {1, 1, 1}}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body_of(r)["error"]["code"], "weight_count_mismatch");
    EXPECT_EQ(s.state()->weights, before);
}

TEST(Service, BadWeightBodies) {
    AnalysisService s(fixture("split.json"));
    EXPECT_EQ(s.handle("PUT", "/api/weights", {}, "{not json").status, 400);
    EXPECT_EQ(put_weights(s, {{"weights", {-1, 2}}}).status, 400);
    EXPECT_EQ(put_weights(s, {{"weights", {0, 0}}}).status, 400);
    EXPECT_EQ(put_weights(s, {{"mode", "psychic"}}).status, 400);
    EXPECT_EQ(put_weights(s, json::object()).status, 400);
}

TEST(Service, StaleSnapshotIsAConflict) {
    AnalysisService s(fixture("split.json"));
    std::string old = s.state()->snapshot->version;
    s.install(fixture("split.json"));
    EXPECT_NE(s.state()->snapshot->version, old);
    auto r = put_weights(s, {{"weights", {1, 1}}, {"snapshot", old}});
    EXPECT_EQ(r.status, 409);
    EXPECT_EQ(body_of(r)["error"]["code"], "stale_snapshot");
    EXPECT_EQ(put_weights(s, {{"weights", {1, 1}}, {"snapshot", s.state()->snapshot->version}}).status, 200);
}

TEST(Service, InstallResetsWeights) {
    AnalysisService s(fixture("split.json"));
    ASSERT_EQ(put_weights(s, {{"weights", {1, 0}}}).status, 200);
    s.install(fixture("two.json"));
    EXPECT_EQ(s.state()->mode, WeightMode::implied);
    EXPECT_EQ(s.state()->weights.values(), (std::vector<Rational>{Rational(3, 4), Rational(1, 4)}));
}

TEST(Service, MatrixEndpoint) {
    AnalysisService s(fixture("two.json"));
    auto doc = get(s, "/api/matrix");
    auto m = comparison_table(fixture("two.json")).matrix(WeightVector::raw({Rational(3, 4), Rational(1, 4)}));
    EXPECT_EQ(without_snapshot(doc), matrix_to_json(m));
}

TEST(Service, KnnOneIsTheMaximalGraph) {
    AnalysisService s(gen_synthetic(42));
    auto maximal = s.handle("GET", "/api/graph", {{"rule", "maximal"}}, "");
    auto knn1 = s.handle("GET", "/api/graph", {{"rule", "knn"}, {"n", "1"}}, "");
    EXPECT_EQ(maximal.body, knn1.body);
}

TEST(Service, ThresholdAboveEveryScoreLeavesIsolatedNodes) {
    AnalysisService s(gen_synthetic(42));
    auto doc = get(s, "/api/graph", {{"rule", "threshold"}, {"t", "1.5"}});
    EXPECT_EQ(doc["nodes"].size(), 15u);
    EXPECT_TRUE(doc["edges"].empty());
}

TEST(Service, GraphFormats) {
    AnalysisService s(fixture("split.json"));
    auto dot = s.handle("GET", "/api/graph", {{"format", "dot"}}, "");
    EXPECT_EQ(dot.content_type, "text/vnd.graphviz");
    EXPECT_EQ(oracle::parse_dot(dot.body).edges.size(), 2u);
    auto graphml = s.handle("GET", "/api/graph", {{"format", "graphml"}}, "");
    EXPECT_EQ(oracle::parse_graphml(graphml.body).nodes.size(), 4u);
    EXPECT_EQ(s.handle("GET", "/api/graph", {{"format", "png"}}, "").status, 400);
}

TEST(Service, GraphRuleErrors) {
    AnalysisService s(fixture("split.json"));
    EXPECT_EQ(s.handle("GET", "/api/graph", {{"rule", "knn"}}, "").status, 400);
    EXPECT_EQ(s.handle("GET", "/api/graph", {{"rule", "knn"}, {"n", "9"}}, "").status, 400);
    EXPECT_EQ(s.handle("GET", "/api/graph", {{"rule", "threshold"}}, "").status, 400);
    auto r = s.handle("GET", "/api/graph", {{"rule", "closest"}}, "");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body_of(r)["error"]["code"], "bad_rule");
    EXPECT_TRUE(body_of(r).contains("snapshot"));
}

TEST(Service, SweepEndpoint) {
    AnalysisService s(gen_synthetic(42));
    auto r = s.handle("POST", "/api/sweep", {}, R"({"delta": 0.25})");
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_EQ(body_of(r)["point_count"], 5);
    auto split = AnalysisService(fixture("split.json")).handle("POST", "/api/sweep", {}, "");
    EXPECT_EQ(body_of(split)["region_count"], 2);
    EXPECT_EQ(s.handle("POST", "/api/sweep", {}, R"({"delta": 0.3})").status, 400);
    auto knn = s.handle("POST", "/api/sweep", {}, R"({"delta": 0.5, "rule": "knn", "n": 2})");
    EXPECT_EQ(body_of(knn)["rule"], "knn:2");
}

TEST(Service, UnknownPathsAndMethods) {
    AnalysisService s(fixture("split.json"));
    EXPECT_EQ(s.handle("GET", "/api/nothing", {}, "").status, 404);
    EXPECT_EQ(s.handle("DELETE", "/api/weights", {}, "").status, 405);
    EXPECT_EQ(s.handle("GET", "/api/sweep", {}, "").status, 405);
}

TEST(Service, ResponsesAreDeterministic) {
    AnalysisService a(gen_synthetic(42)), b(gen_synthetic(42));
    for (const char* path : {"/api/dataset", "/api/weights", "/api/matrix", "/api/graph"})
        EXPECT_EQ(a.handle("GET", path, {}, "").body, b.handle("GET", path, {}, "").body) << path;
}

TEST(Service, ConcurrentReadersNeverSeeTornWeights) {
    AnalysisService s(fixture("split.json"));
    std::atomic<bool> done{false};
    std::atomic<int> bad{0};
    std::thread writer([&] {
        for (int k = 0; k < 300; ++k) put_weights(s, {{"weights", {k % 3, 1}}});
        done = true;
    });
    std::vector<std::thread> readers;
    for (int r = 0; r < 3; ++r) {
        readers.emplace_back([&] {
            while (!done) {
                auto doc = body_of(s.handle("GET", "/api/matrix", {}, ""));
                auto w = doc["weights"];
                double sum = w[0].get<double>() + w[1].get<double>();
                if (std::abs(sum - 1.0) > 1e-12) ++bad;
            }
        });
    }
    writer.join();
    for (auto& t : readers) t.join();
    EXPECT_EQ(bad, 0);
}

// ---- over a real socket ----

TEST(HttpServer, ServesTheSameBodies) {
    AnalysisService s(gen_synthetic(42));
    HttpServer server(s);
    int port = server.start("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    httplib::Client client("127.0.0.1", port);

    auto health = client.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(health->get_header_value("X-Snapshot-Version"), s.state()->snapshot->version);

    auto put = client.Put("/api/weights", R"({"weights": [0.5, 0.5]})", "application/json");
    ASSERT_TRUE(put);
    EXPECT_EQ(put->status, 200);

    auto graph = client.Get("/api/graph?rule=knn&n=2");
    ASSERT_TRUE(graph);
    EXPECT_EQ(graph->body, s.handle("GET", "/api/graph", {{"rule", "knn"}, {"n", "2"}}, "").body);

    auto dot = client.Get("/api/graph?format=dot");
    ASSERT_TRUE(dot);
    EXPECT_EQ(dot->get_header_value("Content-Type"), "text/vnd.graphviz");

    auto bad = client.Put("/api/weights", R"({"weights": [1]})", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);

    auto sweep = client.Post("/api/sweep", R"({"delta": 0.25})", "application/json");
    ASSERT_TRUE(sweep);
    EXPECT_EQ(json::parse(sweep->body)["point_count"], 5);

    auto missing = client.Get("/nope");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    server.stop();
}

TEST(HttpServer, BusyPortIsAnIoError) {
    AnalysisService s(fixture("split.json"));
    HttpServer first(s);
    int port = first.start("127.0.0.1", 0);
    HttpServer second(s);
    EXPECT_THROW(second.start("127.0.0.1", port), IoError);
}
