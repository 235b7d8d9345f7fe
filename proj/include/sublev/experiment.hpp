#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublev/dataset.hpp"
#include "sublev/model.hpp"
#include "sublev/simgen.hpp"
#include "sublev/subdata.hpp"
#include "sublev/timing.hpp"
#include "sublev/varselect.hpp"

namespace sublev {

enum class Method { kAlgorithm1, kOnephaseBaseline, kFulldataLasso };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Subdata size, either a fixed count ("1000") or a fraction of the number
/// of rows ("0.1n", resolved as ceil(0.1 n)).
struct KSpec {
    bool is_fraction = false;
    double fraction = 0.0;
    int count = 1000;

    int resolve(long n) const;
    std::string text() const;
    static KSpec parse(const std::string& text);
};

struct RunConfig {
    std::string mode = "simulate"; // simulate | sweep | realdata | fit
    std::uint64_t seed = 1;
    int workers = 0; // 0 = hardware concurrency
    int replications = 100;
    std::vector<Method> methods{Method::kAlgorithm1};

    SimConfig sim;
    int n_test = 1000;

    VarSelectConfig varsel;
    std::string ps_spec; // "", a count, or "0.1p"

    int baseline_nsample = 1000;
    int baseline_ntimes = 100;

    Selector selector = Selector::kLevss;
    KSpec k;

    int bootstrap_samples = 100;

    std::string out_dir = ".";
    std::string train_path;
    std::string test_path;
    std::string data_path;

    /// When false, every emitted seconds field is written as 0 so that
    /// reruns are byte-identical.
    bool timings = true;

    std::vector<int> sweep_n1{50};
    std::vector<std::string> sweep_ps{"0.1p"};

    /// Resolves the candidate-set size against a concrete p.
    int resolve_ps(long p) const;

    nlohmann::json to_json() const;
    /// Accepts either a plain config object or a manifest ({"config": ...}).
    static RunConfig from_json(const nlohmann::json& j);
};

struct ExperimentResult {
    int replicate = 0;
    std::string method;
    double power = 0.0;
    double error = 0.0;
    double mse = 0.0;
    StageTimings timings;
    bool ok = true;
    std::string message;
};

/// Fixed stage order of the result CSV.
const std::vector<std::string>& result_stages();

/// Runs one method's full pipeline on a dataset.
FittedModel run_pipeline_method(const Dataset& data, Method method,
                                const RunConfig& cfg, StreamKey key,
                                int workers, StageTimings* timings);

/// All replications of the simulation study, in replicate-major order.
std::vector<ExperimentResult> simulate_replications(const RunConfig& cfg);

std::string results_to_csv(const std::vector<ExperimentResult>& results,
                           bool with_timings, const std::string& prefix_header = "",
                           const std::string& prefix_values = "");
nlohmann::json summarize(const std::vector<ExperimentResult>& results,
                         bool with_timings);

void write_manifest(const RunConfig& cfg);

void run_simulation(const RunConfig& cfg);
void run_sweep(const RunConfig& cfg);
void run_realdata(const RunConfig& cfg);
void run_fit(const RunConfig& cfg);

} // namespace sublev
