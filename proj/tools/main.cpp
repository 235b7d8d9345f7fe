#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sublev/errors.hpp"
#include "sublev/experiment.hpp"
#include "sublev/version.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    int workers = -1;
    std::string k_spec;
    std::string methods;
    int replications = -1;
    bool no_timings = false;
    std::string selector;
    std::string data, train, test;
    int bootstrap = -1;

    // simulation shorthands
    int n = -1, p = -1, p1 = -1;
    double sigma2 = -1.0;
    std::string dist, cov;
    int s = -1, n1 = -1, n2 = -1;
    std::string ps;

    CLI::App* sub = nullptr;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON config file or manifest");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--workers", o.workers, "worker threads (0 = hardware)");
    sub->add_option("--k", o.k_spec, "subdata size: count or fraction like 0.1n");
    sub->add_option("--methods", o.methods,
                    "comma list of algorithm1,onephase_baseline,fulldata_lasso");
    sub->add_option("--selector", o.selector, "subdata selector: levss or iboss");
    sub->add_flag("--no-timings", o.no_timings,
                  "write all seconds fields as 0 (byte-reproducible output)");
}

void add_sim(CLI::App* sub, Overrides& o) {
    sub->add_option("--replications", o.replications, "number of replications");
    sub->add_option("--n", o.n, "training rows");
    sub->add_option("--p", o.p, "covariates");
    sub->add_option("--p1", o.p1, "true active covariates");
    sub->add_option("--sigma2", o.sigma2, "error variance");
    sub->add_option("--dist", o.dist,
                    "covariate distribution: normal|lognormal|t2|t3|mixture");
    sub->add_option("--cov", o.cov, "covariance: identity|equicorrelated");
    sub->add_option("--s", o.s, "subsample size for selection");
    sub->add_option("--n1", o.n1, "phase-1 subsamples");
    sub->add_option("--n2", o.n2, "phase-2 subsamples");
    sub->add_option("--ps", o.ps, "candidate variables: count or 0.1p");
}

sublev::RunConfig build_config(const Overrides& o, const std::string& mode) {
    sublev::RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream file(o.config_path);
        if (!file.is_open()) {
            throw sublev::ConfigError("cannot open config: " + o.config_path);
        }
        nlohmann::json j;
        file >> j;
        cfg = sublev::RunConfig::from_json(j);
    }
    cfg.mode = mode;

    const CLI::App* sub = o.sub;
    if (sub->count("--seed")) cfg.seed = o.seed;
    if (sub->count("--out")) cfg.out_dir = o.out;
    if (sub->count("--workers")) cfg.workers = o.workers;
    if (sub->count("--k")) cfg.k = sublev::KSpec::parse(o.k_spec);
    if (sub->count("--selector")) {
        cfg.selector = sublev::selector_from_name(o.selector);
    }
    if (sub->count("--methods")) {
        cfg.methods.clear();
        std::string rest = o.methods;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            cfg.methods.push_back(
                sublev::method_from_name(rest.substr(0, comma)));
            if (comma == std::string::npos) break;
            rest.erase(0, comma + 1);
        }
    }
    if (o.no_timings) cfg.timings = false;
    if (sub->count("--replications")) cfg.replications = o.replications;
    if (sub->count("--n")) cfg.sim.n = o.n;
    if (sub->count("--p")) cfg.sim.p = o.p;
    if (sub->count("--p1")) cfg.sim.p1 = o.p1;
    if (sub->count("--sigma2")) cfg.sim.sigma2 = o.sigma2;
    if (sub->count("--dist")) cfg.sim.dist = sublev::Distribution::parse(o.dist);
    if (sub->count("--cov")) {
        if (o.cov == "identity") {
            cfg.sim.cov = sublev::CovKind::kIdentity;
        } else if (o.cov == "equicorrelated") {
            cfg.sim.cov = sublev::CovKind::kEquicorrelated;
        } else {
            throw sublev::ConfigError("unknown covariance kind: " + o.cov);
        }
    }
    if (sub->count("--s")) cfg.varsel.s = o.s;
    if (sub->count("--n1")) cfg.varsel.n1 = o.n1;
    if (sub->count("--n2")) cfg.varsel.n2 = o.n2;
    if (sub->count("--ps")) cfg.ps_spec = o.ps;
    if (sub->count("--data")) cfg.data_path = o.data;
    if (sub->count("--train")) cfg.train_path = o.train;
    if (sub->count("--test")) cfg.test_path = o.test;
    if (sub->count("--bootstrap-samples")) cfg.bootstrap_samples = o.bootstrap;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-stage subsampled variable selection and leverage-based "
                 "subdata regression"};
    app.set_version_flag("--version", sublev::kVersion);
    app.require_subcommand(1);

    Overrides o;

    CLI::App* simulate = app.add_subcommand("simulate", "run a simulation study");
    add_common(simulate, o);
    add_sim(simulate, o);

    CLI::App* sweep = app.add_subcommand("sweep", "tuning grid over n1 x p_s");
    add_common(sweep, o);
    add_sim(sweep, o);

    CLI::App* realdata =
        app.add_subcommand("realdata", "bootstrap MSPE on train/test CSV data");
    add_common(realdata, o);
    realdata->add_option("--train", o.train, "training CSV (response last)");
    realdata->add_option("--test", o.test, "test CSV (response last)");
    realdata->add_option("--bootstrap-samples", o.bootstrap,
                         "bootstrap resamples per method");

    CLI::App* fit = app.add_subcommand("fit", "fit one model on a CSV");
    add_common(fit, o);
    add_sim(fit, o);
    fit->add_option("--data", o.data, "input CSV (response last)");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        o.sub = sub;
        const std::string mode = sub->get_name();
        const sublev::RunConfig cfg = build_config(o, mode);
        if (mode == "simulate") {
            sublev::run_simulation(cfg);
        } else if (mode == "sweep") {
            sublev::run_sweep(cfg);
        } else if (mode == "realdata") {
            sublev::run_realdata(cfg);
        } else {
            sublev::run_fit(cfg);
        }
    } catch (const sublev::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
