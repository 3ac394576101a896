// Experiment harness CLI. Talks to the simulation core exclusively through
// the C API in kksim/kksim.h.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kksim/kksim.h"

namespace {

struct ScopedString {
    char* p = nullptr;
    ~ScopedString() { kksim_string_free(p); }
};

[[noreturn]] void die(const std::string& context) {
    std::fprintf(stderr, "error: %s: %s\n", context.c_str(), kksim_last_error());
    std::exit(1);
}

void check(kksim_status st, const std::string& context) {
    if (st != KKSIM_OK) die(context);
}

std::pair<std::string, std::string> split_kv(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
        std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
        std::exit(1);
    }
    return {kv.substr(0, eq), kv.substr(eq + 1)};
}

void write_file(const std::string& path, const char* content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
        std::exit(1);
    }
    os << content;
}

std::string ensure_out_dir(const std::string& out_dir, const std::string& hash) {
    const std::filesystem::path dir = std::filesystem::path(out_dir) / hash;
    std::filesystem::create_directories(dir);
    return dir.string();
}

kksim_scenario* load_scenario(const std::string& path, const std::vector<std::string>& sets,
                              long long seed_override) {
    kksim_scenario* sc = nullptr;
    check(kksim_scenario_from_file(path.c_str(), &sc), "loading " + path);
    for (const auto& kv : sets) {
        auto [k, v] = split_kv(kv);
        check(kksim_scenario_set(sc, k.c_str(), v.c_str()), "applying --set " + kv);
    }
    if (seed_override >= 0)
        check(kksim_scenario_set(sc, "seed", std::to_string(seed_override).c_str()),
              "applying --seed");
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-sideband KK receiver simulator with dither cancellation"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::vector<std::string> sets;
    long long seed_override = -1;
    unsigned workers = 1;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--out-dir", out_dir, "Output directory (default: out)");
        c->add_option("--set", sets, "Override a config field, key=value (dotted path)");
        c->add_option("--seed", seed_override, "Override the scenario seed");
    };

    std::string run_file;
    CLI::App* run = app.add_subcommand("run", "Run one scenario and write summary.json");
    run->add_option("scenario", run_file, "Scenario JSON file")->required();
    add_common(run);
    run->add_option("--threads", threads, "Grid-search threads (0 = hardware)");

    std::string sweep_file;
    bool keep_going = false;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep and write curve.csv + summary.json");
    sweep->add_option("sweep", sweep_file, "Sweep JSON file")->required();
    add_common(sweep);
    sweep->add_option("--workers", workers, "Concurrent sweep points (default 1)");
    sweep->add_flag("--keep-going", keep_going, "Continue past failing sweep points");

    std::string psd_file, stage = "rx_current";
    CLI::App* psd = app.add_subcommand("psd", "Dump a pipeline-stage PSD as CSV");
    psd->add_option("scenario", psd_file, "Scenario JSON file")->required();
    psd->add_option("--stage", stage, "tx_field | rx_current | corrected_current");
    add_common(psd);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        kksim_scenario* sc = load_scenario(run_file, sets, seed_override);
        kksim_result* res = nullptr;
        check(kksim_run_scenario(sc, threads, &res), "running scenario");
        ScopedString hash, summary;
        check(kksim_scenario_hash(sc, &hash.p), "hashing scenario");
        check(kksim_result_summary_json(res, &summary.p), "serializing summary");
        const std::string dir = ensure_out_dir(out_dir, hash.p);
        write_file(dir + "/summary.json", summary.p);
        std::printf("%s/summary.json\n", dir.c_str());
        kksim_result_free(res);
        kksim_scenario_free(sc);
        return 0;
    }

    if (sweep->parsed()) {
        kksim_sweep* sw = nullptr;
        check(kksim_sweep_from_file(sweep_file.c_str(), &sw), "loading " + sweep_file);
        for (const auto& kv : sets) {
            auto [k, v] = split_kv(kv);
            check(kksim_sweep_set(sw, k.c_str(), v.c_str()), "applying --set " + kv);
        }
        if (seed_override >= 0)
            check(kksim_sweep_set(sw, "base.seed", std::to_string(seed_override).c_str()),
                  "applying --seed");
        kksim_sweep_result* res = nullptr;
        check(kksim_run_sweep(sw, workers, keep_going ? 1 : 0, &res), "running sweep");
        ScopedString hash, curve, summary;
        check(kksim_sweep_hash(sw, &hash.p), "hashing sweep");
        check(kksim_sweep_result_curve_csv(res, &curve.p), "serializing curve");
        check(kksim_sweep_result_summary_json(res, &summary.p), "serializing summary");
        const std::string dir = ensure_out_dir(out_dir, hash.p);
        write_file(dir + "/curve.csv", curve.p);
        write_file(dir + "/summary.json", summary.p);
        std::printf("%s/curve.csv\n%s/summary.json\n", dir.c_str(), dir.c_str());
        kksim_sweep_result_free(res);
        kksim_sweep_free(sw);
        return 0;
    }

    if (psd->parsed()) {
        kksim_scenario* sc = load_scenario(psd_file, sets, seed_override);
        ScopedString hash, csv;
        check(kksim_run_psd(sc, stage.c_str(), 0, &csv.p), "computing psd");
        check(kksim_scenario_hash(sc, &hash.p), "hashing scenario");
        const std::string dir = ensure_out_dir(out_dir, hash.p);
        write_file(dir + "/psd_" + stage + ".csv", csv.p);
        std::printf("%s/psd_%s.csv\n", dir.c_str(), stage.c_str());
        kksim_scenario_free(sc);
        return 0;
    }
    return 0;
}
