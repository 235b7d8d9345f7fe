#include "sublev/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>

#include "sublev/errors.hpp"
#include "sublev/lasso.hpp"
#include "sublev/metrics.hpp"
#include "sublev/parallel.hpp"
#include "sublev/version.hpp"

namespace sublev {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file.is_open()) throw Error("cannot write " + path);
    file << content;
}

} // namespace

std::string method_name(Method m) {
    switch (m) {
    case Method::kAlgorithm1: return "algorithm1";
    case Method::kOnephaseBaseline: return "onephase_baseline";
    case Method::kFulldataLasso: return "fulldata_lasso";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "algorithm1") return Method::kAlgorithm1;
    if (name == "onephase_baseline") return Method::kOnephaseBaseline;
    if (name == "fulldata_lasso") return Method::kFulldataLasso;
    throw ConfigError("unknown method: " + name);
}

int KSpec::resolve(long n) const {
    int k = is_fraction
                ? static_cast<int>(std::ceil(fraction * static_cast<double>(n)))
                : count;
    if (k < 1) throw InvalidParamError("k must resolve to >= 1");
    return k;
}

std::string KSpec::text() const {
    if (is_fraction) return fmt_double(fraction) + "n";
    return std::to_string(count);
}

KSpec KSpec::parse(const std::string& text) {
    KSpec k;
    if (text.empty()) throw ConfigError("empty k spec");
    if (text.back() == 'n') {
        k.is_fraction = true;
        try {
            k.fraction = std::stod(text.substr(0, text.size() - 1));
        } catch (const std::exception&) {
            throw ConfigError("bad k spec: " + text);
        }
        if (k.fraction <= 0.0) throw ConfigError("k fraction must be > 0");
    } else {
        try {
            k.count = std::stoi(text);
        } catch (const std::exception&) {
            throw ConfigError("bad k spec: " + text);
        }
        if (k.count < 1) throw ConfigError("k must be >= 1");
    }
    return k;
}

int RunConfig::resolve_ps(long p) const {
    if (ps_spec.empty()) return varsel.resolved_ps(p);
    if (ps_spec.back() == 'p') {
        double frac = 0.0;
        try {
            frac = std::stod(ps_spec.substr(0, ps_spec.size() - 1));
        } catch (const std::exception&) {
            throw ConfigError("bad p_s spec: " + ps_spec);
        }
        if (frac <= 0.0) throw ConfigError("p_s fraction must be > 0");
        return static_cast<int>(std::ceil(frac * static_cast<double>(p)));
    }
    try {
        return std::stoi(ps_spec);
    } catch (const std::exception&) {
        throw ConfigError("bad p_s spec: " + ps_spec);
    }
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["mode"] = mode;
    j["seed"] = seed;
    j["replications"] = replications;
    std::vector<std::string> ms;
    for (Method m : methods) ms.push_back(method_name(m));
    j["methods"] = ms;
    j["sim"] = {{"n", sim.n},
                {"p", sim.p},
                {"p1", sim.p1},
                {"beta_active", sim.beta_active},
                {"intercept", sim.intercept},
                {"sigma2", sim.sigma2},
                {"dist", sim.dist.name()},
                {"cov", sim.cov == CovKind::kIdentity ? "identity" : "equicorrelated"}};
    j["n_test"] = n_test;
    j["varsel"] = {{"n1", varsel.n1},
                   {"n2", varsel.n2},
                   {"s", varsel.s},
                   {"n_folds", varsel.n_folds},
                   {"p_s", ps_spec.empty() ? (varsel.p_s > 0
                                                  ? std::to_string(varsel.p_s)
                                                  : std::string("0.1p"))
                                           : ps_spec}};
    j["baseline"] = {{"nsample", baseline_nsample}, {"ntimes", baseline_ntimes}};
    j["subdata"] = {{"selector", selector_name(selector)}, {"k", k.text()}};
    j["bootstrap_samples"] = bootstrap_samples;
    j["timings"] = timings;
    nlohmann::json paths = nlohmann::json::object();
    if (!train_path.empty()) paths["train"] = train_path;
    if (!test_path.empty()) paths["test"] = test_path;
    if (!data_path.empty()) paths["data"] = data_path;
    j["paths"] = paths;
    if (mode == "sweep") {
        j["sweep"] = {{"n1", sweep_n1}, {"p_s", sweep_ps}};
    }
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& root) {
    const nlohmann::json& j = root.contains("config") ? root.at("config") : root;
    RunConfig cfg;
    cfg.mode = j.value("mode", cfg.mode);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.replications = j.value("replications", cfg.replications);
    if (j.contains("methods")) {
        cfg.methods.clear();
        for (const auto& name : j.at("methods")) {
            cfg.methods.push_back(method_from_name(name.get<std::string>()));
        }
    }
    if (j.contains("sim")) {
        const auto& s = j.at("sim");
        cfg.sim.n = s.value("n", cfg.sim.n);
        cfg.sim.p = s.value("p", cfg.sim.p);
        cfg.sim.p1 = s.value("p1", cfg.sim.p1);
        cfg.sim.beta_active = s.value("beta_active", cfg.sim.beta_active);
        cfg.sim.intercept = s.value("intercept", cfg.sim.intercept);
        cfg.sim.sigma2 = s.value("sigma2", cfg.sim.sigma2);
        if (s.contains("dist")) {
            cfg.sim.dist = Distribution::parse(s.at("dist").get<std::string>());
        }
        if (s.contains("cov")) {
            const std::string cov = s.at("cov").get<std::string>();
            if (cov == "identity") {
                cfg.sim.cov = CovKind::kIdentity;
            } else if (cov == "equicorrelated") {
                cfg.sim.cov = CovKind::kEquicorrelated;
            } else {
                throw ConfigError("unknown covariance kind: " + cov);
            }
        }
    }
    cfg.n_test = j.value("n_test", cfg.n_test);
    if (j.contains("varsel")) {
        const auto& v = j.at("varsel");
        cfg.varsel.n1 = v.value("n1", cfg.varsel.n1);
        cfg.varsel.n2 = v.value("n2", cfg.varsel.n2);
        cfg.varsel.s = v.value("s", cfg.varsel.s);
        cfg.varsel.n_folds = v.value("n_folds", cfg.varsel.n_folds);
        if (v.contains("p_s")) {
            if (v.at("p_s").is_number_integer()) {
                cfg.varsel.p_s = v.at("p_s").get<int>();
            } else {
                cfg.ps_spec = v.at("p_s").get<std::string>();
            }
        }
    }
    if (j.contains("baseline")) {
        cfg.baseline_nsample = j.at("baseline").value("nsample", cfg.baseline_nsample);
        cfg.baseline_ntimes = j.at("baseline").value("ntimes", cfg.baseline_ntimes);
    }
    if (j.contains("subdata")) {
        const auto& s = j.at("subdata");
        if (s.contains("selector")) {
            cfg.selector = selector_from_name(s.at("selector").get<std::string>());
        }
        if (s.contains("k")) {
            if (s.at("k").is_number_integer()) {
                cfg.k.is_fraction = false;
                cfg.k.count = s.at("k").get<int>();
            } else {
                cfg.k = KSpec::parse(s.at("k").get<std::string>());
            }
        }
    }
    cfg.bootstrap_samples = j.value("bootstrap_samples", cfg.bootstrap_samples);
    cfg.timings = j.value("timings", cfg.timings);
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        cfg.train_path = p.value("train", cfg.train_path);
        cfg.test_path = p.value("test", cfg.test_path);
        cfg.data_path = p.value("data", cfg.data_path);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (s.contains("n1")) cfg.sweep_n1 = s.at("n1").get<std::vector<int>>();
        if (s.contains("p_s")) {
            cfg.sweep_ps.clear();
            for (const auto& v : s.at("p_s")) {
                if (v.is_number_integer()) {
                    cfg.sweep_ps.push_back(std::to_string(v.get<int>()));
                } else {
                    cfg.sweep_ps.push_back(v.get<std::string>());
                }
            }
        }
    }
    return cfg;
}

const std::vector<std::string>& result_stages() {
    static const std::vector<std::string> stages = {
        "phase1_lasso", "phase2_lasso", "kmeans", "subdata", "final_fit", "total"};
    return stages;
}

namespace {

FittedModel fit_with_selector(const Dataset& data, const ActiveSet& active,
                              Selector selector, int k, StageTimings* timings) {
    SubdataSelection selection;
    selection.selector = selector;
    if (!active.indices.empty()) {
        StageTimer t(timings, "subdata");
        const Matrix X_active = take_columns(data.X, active.indices);
        selection = selector == Selector::kLevss ? levss_select(X_active, k)
                                                 : iboss_select(X_active, k);
    }
    StageTimer t(timings, "final_fit");
    return fit_final(data, active, selection);
}

FittedModel full_rows_fit(const Dataset& data, const ActiveSet& active,
                          StageTimings* timings) {
    StageTimer t(timings, "final_fit");
    SubdataSelection all_rows;
    all_rows.selector = Selector::kLevss;
    all_rows.row_indices.resize(static_cast<std::size_t>(data.n()));
    std::iota(all_rows.row_indices.begin(), all_rows.row_indices.end(), 0);
    FittedModel model = fit_final(data, active, all_rows);
    model.meta.selector = "none";
    return model;
}

} // namespace

FittedModel run_pipeline_method(const Dataset& data, Method method,
                                const RunConfig& cfg, StreamKey key,
                                int workers, StageTimings* timings) {
    StageTimer total(timings, "total");
    const int k = cfg.k.resolve(data.n());
    if (k > data.n()) {
        throw KTooLargeError("k=" + std::to_string(k) + " exceeds n=" +
                             std::to_string(data.n()));
    }

    FittedModel model;
    switch (method) {
    case Method::kAlgorithm1: {
        VarSelectConfig vs = cfg.varsel;
        vs.p_s = cfg.resolve_ps(data.p());
        vs.s = std::min<int>(vs.s, static_cast<int>(data.n()));
        const ActiveSet active =
            select_variables(data, vs, key.derive("varsel", 0), workers, timings);
        model = fit_with_selector(data, active, cfg.selector, k, timings);
        break;
    }
    case Method::kOnephaseBaseline: {
        const int nsample =
            std::min<int>(cfg.baseline_nsample, static_cast<int>(data.n()));
        const ActiveSet active = select_variables_onephase_baseline(
            data, nsample, cfg.baseline_ntimes, key.derive("varsel", 0), workers,
            timings);
        model = fit_with_selector(data, active, Selector::kIboss, k, timings);
        break;
    }
    case Method::kFulldataLasso: {
        ActiveSet active;
        {
            StageTimer t(timings, "phase1_lasso");
            const CvLassoFit cv = cv_lasso(data.X, data.y, 10,
                                           key.derive("cv", 0), 100, 1e-3, workers);
            for (long j = 0; j < cv.fit.slopes.size(); ++j) {
                if (cv.fit.slopes(j) != 0.0) {
                    active.indices.push_back(static_cast<int>(j));
                }
            }
        }
        model = full_rows_fit(data, active, timings);
        break;
    }
    }
    return model;
}

std::vector<ExperimentResult> simulate_replications(const RunConfig& cfg) {
    cfg.sim.validate();
    const int reps = cfg.replications;
    if (reps < 1) throw InvalidParamError("replications must be >= 1");
    const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
    const int inner_workers = reps == 1 ? workers : 1;

    const Vector beta_true = cfg.sim.true_beta();
    std::vector<int> truth;
    for (int j = 0; j < cfg.sim.p1; ++j) truth.push_back(j);

    std::vector<ExperimentResult> results(
        static_cast<std::size_t>(reps) * cfg.methods.size());

    const StreamKey master(cfg.seed);
    parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t r) {
        const StreamKey rep = master.derive("rep", r);

        Dataset train;
        train.X = gen_covariates(cfg.sim, rep.derive("train", 0), inner_workers);
        train.y = gen_response(train.X, cfg.sim, rep.derive("train", 0));

        SimConfig test_cfg = cfg.sim;
        test_cfg.n = cfg.n_test;
        Dataset test;
        test.X = gen_covariates(test_cfg, rep.derive("test", 0), inner_workers);
        test.y = gen_response(test.X, test_cfg, rep.derive("test", 0));

        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            const Method method = cfg.methods[mi];
            ExperimentResult& res = results[r * cfg.methods.size() + mi];
            res.replicate = static_cast<int>(r);
            res.method = method_name(method);
            try {
                FittedModel model =
                    run_pipeline_method(train, method, cfg,
                                        rep.derive(res.method, 0), inner_workers,
                                        &res.timings);
                const SelectionScore score =
                    power_error(model.active_indices, truth, cfg.sim.p);
                res.power = score.power;
                res.error = score.error;
                res.mse = mse_test(beta_true, model, test.X);
            } catch (const Error& e) {
                res.ok = false;
                res.message = e.what();
                res.power = res.error = res.mse =
                    std::numeric_limits<double>::quiet_NaN();
            }
        }
    });
    return results;
}

std::string results_to_csv(const std::vector<ExperimentResult>& results,
                           bool with_timings, const std::string& prefix_header,
                           const std::string& prefix_values) {
    std::string csv = prefix_header + "replicate,method,power,error,mse,stage,seconds\n";
    for (const auto& res : results) {
        for (const auto& stage : result_stages()) {
            double seconds = 0.0;
            if (with_timings) {
                const auto it = res.timings.find(stage);
                if (it != res.timings.end()) seconds = it->second;
            }
            csv += prefix_values + std::to_string(res.replicate) + ',' + res.method +
                   ',' + fmt_double(res.power) + ',' + fmt_double(res.error) + ',' +
                   fmt_double(res.mse) + ',' + stage + ',' + fmt_double(seconds) +
                   '\n';
        }
    }
    return csv;
}

nlohmann::json summarize(const std::vector<ExperimentResult>& results,
                         bool with_timings) {
    nlohmann::json methods = nlohmann::json::object();
    std::vector<std::string> names;
    for (const auto& res : results) {
        if (std::find(names.begin(), names.end(), res.method) == names.end()) {
            names.push_back(res.method);
        }
    }
    for (const auto& name : names) {
        double power = 0.0, error = 0.0, mse = 0.0;
        StageTimings seconds;
        int n_ok = 0, n_failed = 0;
        for (const auto& res : results) {
            if (res.method != name) continue;
            if (!res.ok) {
                ++n_failed;
                continue;
            }
            ++n_ok;
            power += res.power;
            error += res.error;
            mse += res.mse;
            for (const auto& stage : result_stages()) {
                const auto it = res.timings.find(stage);
                seconds[stage] +=
                    (with_timings && it != res.timings.end()) ? it->second : 0.0;
            }
        }
        nlohmann::json m;
        m["n_ok"] = n_ok;
        m["n_failed"] = n_failed;
        if (n_ok > 0) {
            m["mean_power"] = power / n_ok;
            m["mean_error"] = error / n_ok;
            m["mean_mse"] = mse / n_ok;
            nlohmann::json sec = nlohmann::json::object();
            for (const auto& [stage, total] : seconds) sec[stage] = total / n_ok;
            m["mean_seconds"] = sec;
        }
        methods[name] = m;
    }
    return methods;
}

void write_manifest(const RunConfig& cfg) {
    nlohmann::json manifest;
    manifest["tool"] = "sublev";
    manifest["version"] = kVersion;
    manifest["config"] = cfg.to_json();
    write_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

void run_simulation(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(cfg);

    const std::vector<ExperimentResult> results = simulate_replications(cfg);
    for (const auto& res : results) {
        if (!res.ok) {
            std::cerr << "replicate " << res.replicate << " method " << res.method
                      << " failed: " << res.message << "\n";
        }
    }
    write_file(cfg.out_dir + "/results.csv", results_to_csv(results, cfg.timings));

    nlohmann::json summary;
    summary["mode"] = "simulate";
    summary["replications"] = cfg.replications;
    summary["methods"] = summarize(results, cfg.timings);
    write_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
}

void run_sweep(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(cfg);

    std::string csv =
        "n1,p_s,replicate,method,power,error,mse,stage,seconds\n";
    nlohmann::json cells = nlohmann::json::object();
    for (int n1 : cfg.sweep_n1) {
        for (const std::string& ps : cfg.sweep_ps) {
            RunConfig cell = cfg;
            cell.varsel.n1 = n1;
            cell.ps_spec = ps;
            const int ps_resolved = cell.resolve_ps(cfg.sim.p);
            const std::vector<ExperimentResult> results =
                simulate_replications(cell);
            const std::string prefix_values =
                std::to_string(n1) + ',' + std::to_string(ps_resolved) + ',';
            std::string block = results_to_csv(results, cfg.timings, "", prefix_values);
            block.erase(0, block.find('\n') + 1); // drop inner header
            csv += block;
            cells["n1=" + std::to_string(n1) + ",p_s=" + std::to_string(ps_resolved)] =
                summarize(results, cfg.timings);
        }
    }
    write_file(cfg.out_dir + "/sweep.csv", csv);

    nlohmann::json summary;
    summary["mode"] = "sweep";
    summary["replications"] = cfg.replications;
    summary["cells"] = cells;
    write_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
}

void run_realdata(const RunConfig& cfg) {
    if (cfg.train_path.empty() || cfg.test_path.empty()) {
        throw ConfigError("realdata mode needs paths.train and paths.test");
    }
    const Dataset train = load_csv(cfg.train_path);
    const Dataset test = load_csv(cfg.test_path);
    if (train.p() != test.p()) {
        throw DimensionMismatchError("train and test column counts differ");
    }
    const int k = cfg.k.resolve(train.n());
    if (k > train.n()) throw KTooLargeError("k exceeds training rows");

    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(cfg);

    const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
    std::string csv = "sample,method,mspe\n";
    nlohmann::json summary_methods = nlohmann::json::object();
    const StreamKey master(cfg.seed);

    for (Method method : cfg.methods) {
        const std::string name = method_name(method);
        const PipelineFn pipeline = [&](const Dataset& d, StreamKey key) {
            return run_pipeline_method(d, method, cfg, key, 1, nullptr);
        };
        const BootstrapMspe boot =
            bootstrap_mspe(train, test, pipeline, cfg.bootstrap_samples,
                           master.derive(name, 0), workers);
        double mean = 0.0;
        int n_ok = 0;
        for (std::size_t b = 0; b < boot.mspe.size(); ++b) {
            csv += std::to_string(b) + ',' + name + ',' + fmt_double(boot.mspe[b]) + '\n';
            if (std::isfinite(boot.mspe[b])) {
                mean += boot.mspe[b];
                ++n_ok;
            }
        }
        nlohmann::json m;
        m["n_ok"] = n_ok;
        m["n_failed"] = boot.n_failed;
        if (n_ok > 0) m["mean_mspe"] = mean / n_ok;
        summary_methods[name] = m;
    }
    write_file(cfg.out_dir + "/mspe.csv", csv);

    nlohmann::json summary;
    summary["mode"] = "realdata";
    summary["bootstrap_samples"] = cfg.bootstrap_samples;
    summary["n_train"] = train.n();
    summary["n_test"] = test.n();
    summary["p"] = train.p();
    summary["k"] = k;
    summary["methods"] = summary_methods;
    write_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
}

void run_fit(const RunConfig& cfg) {
    const std::string path = !cfg.data_path.empty() ? cfg.data_path : cfg.train_path;
    if (path.empty()) throw ConfigError("fit mode needs paths.data");
    const Dataset data = load_csv(path);

    // Validate the subdata size before any heavy work.
    const int k = cfg.k.resolve(data.n());
    if (k > data.n()) {
        throw KTooLargeError("k=" + std::to_string(k) + " exceeds n=" +
                             std::to_string(data.n()));
    }

    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(cfg);

    const int workers = cfg.workers > 0 ? cfg.workers : default_workers();
    const Method method = cfg.methods.empty() ? Method::kAlgorithm1 : cfg.methods[0];
    StageTimings timings;
    FittedModel model = run_pipeline_method(data, method, cfg,
                                            StreamKey(cfg.seed).derive("fit", 0),
                                            workers, &timings);
    model.meta.seed = cfg.seed;
    model.meta.timings = timings;
    if (!cfg.timings) {
        for (auto& [stage, sec] : model.meta.timings) sec = 0.0;
    }
    write_file(cfg.out_dir + "/model.json", model_to_json(model).dump(2) + "\n");
}

} // namespace sublev
