#pragma once

// JSON-over-HTTP access to one dataset snapshot and one current weight vector.
//
//   GET  /api/health
//   GET  /api/dataset                 summary: artifacts, groups, eras, perspectives with sizes
//   GET  /api/weights
//   PUT  /api/weights                 {"weights": [...], "mode": "expert"|"uniform"|"implied"}
//   GET  /api/matrix
//   GET  /api/graph?rule=maximal|knn&n=<n>|threshold&t=<t>[&format=json|dot|graphml]
//   POST /api/sweep                   {"delta": 0.25, "rule": "maximal"|"knn"|"threshold", "n", "t"}
//
// Every response carries the snapshot version ("snapshot" in JSON bodies, the
// X-Snapshot-Version header otherwise). Errors are {"error": {"code", "message"}}
// with a 4xx status.

#include "cnet/dataset_io.hpp"
#include "cnet/graph.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace cnet {

struct ServiceOptions {
    Closure closure = Closure::none;
    SimilarityFormula formula = SimilarityFormula::weighted_overlap_fraction;
};

enum class WeightMode { uniform, implied, expert };

const char* to_string(WeightMode mode);
WeightMode parse_weight_mode(const std::string& text);

// Weights for a mode. Expert weights must match the perspective count and are
// normalized; they are ignored for the other modes.
WeightVector resolve_weights(const ComparisonTable& table, WeightMode mode,
                             const std::vector<Rational>& expert = {});

// Fully derived, immutable view of one dataset.
struct Snapshot {
    Dataset dataset;
    ComparisonTable table;
    ImpliedWeights implied;
    std::string version;
};

// Snapshot and weights travel together so no request sees a torn pair.
struct SessionState {
    std::shared_ptr<const Snapshot> snapshot;
    WeightVector weights;
    WeightMode mode = WeightMode::implied;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::string snapshot;
};

class AnalysisService {
public:
    AnalysisService(Dataset dataset, ServiceOptions options = {});

    // Replaces the snapshot atomically; weights reset to the implied model.
    void install(Dataset dataset);

    std::shared_ptr<const SessionState> state() const;
    const ServiceOptions& options() const { return options_; }

    ApiResponse handle(const std::string& method, const std::string& path,
                       const std::map<std::string, std::string>& query, const std::string& body);

private:
    ApiResponse put_weights(const std::string& body);

    ServiceOptions options_;
    mutable std::mutex mutex_;
    std::shared_ptr<const SessionState> state_;
    std::uint64_t generation_ = 0;
};

// Runs an AnalysisService behind cpp-httplib on a background thread.
class HttpServer {
public:
    explicit HttpServer(AnalysisService& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Port 0 picks a free port. Returns the bound port; throws IoError when
    // the address cannot be bound.
    int start(const std::string& host, int port);
    // Blocks until stop() is called from elsewhere.
    void wait();
    void stop();

private:
    AnalysisService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace cnet
