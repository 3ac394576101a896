#include "kksim/kksim.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "kksim/harness.hpp"

using namespace kksim;

struct kksim_scenario {
    Scenario s;
};
struct kksim_sweep {
    SweepSpec spec;
};
struct kksim_result {
    Scenario s;
    ScenarioResult r;
};
struct kksim_sweep_result {
    SweepSpec spec;
    SweepResult r;
};

namespace {

thread_local std::string g_last_error;

kksim_status fail(kksim_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string read_file(const char* path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error(std::string("cannot read ") + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

template <typename Fn>
kksim_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return KKSIM_OK;
    } catch (const ConfigError& e) {
        return fail(KKSIM_ERR_CONFIG, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(KKSIM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::runtime_error& e) {
        return fail(KKSIM_ERR_RUNTIME, e.what());
    } catch (const std::exception& e) {
        return fail(KKSIM_ERR_RUNTIME, e.what());
    }
}

}  // namespace

extern "C" {

const char* kksim_version(void) { return "1.0.0"; }

const char* kksim_last_error(void) { return g_last_error.c_str(); }

void kksim_string_free(char* s) { std::free(s); }

kksim_status kksim_scenario_create(const char* json_text, kksim_scenario** out) {
    if (!json_text || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new kksim_scenario{scenario_from_json(json_text)}; });
}

kksim_status kksim_scenario_create_default(kksim_scenario** out) {
    if (!out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        Scenario s;
        s.validate();
        *out = new kksim_scenario{std::move(s)};
    });
}

kksim_status kksim_scenario_from_file(const char* path, kksim_scenario** out) {
    if (!path || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        return fail(KKSIM_ERR_IO, e.what());
    }
    return kksim_scenario_create(text.c_str(), out);
}

kksim_status kksim_scenario_set(kksim_scenario* s, const char* dotted_key, const char* value) {
    if (!s || !dotted_key || !value) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string updated = json_set_path(scenario_to_json(s->s), dotted_key, value);
        s->s = scenario_from_json(updated);
    });
}

kksim_status kksim_scenario_to_json(const kksim_scenario* s, char** out) {
    if (!s || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(scenario_to_json(s->s)); });
}

kksim_status kksim_scenario_hash(const kksim_scenario* s, char** out) {
    if (!s || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(scenario_hash(s->s)); });
}

void kksim_scenario_free(kksim_scenario* s) { delete s; }

kksim_status kksim_run_scenario(const kksim_scenario* s, unsigned threads, kksim_result** out) {
    if (!s || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new kksim_result{s->s, run_scenario(s->s, threads)}; });
}

kksim_status kksim_result_summary_json(const kksim_result* r, char** out) {
    if (!r || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(summary_to_json(r->s, r->r)); });
}

void kksim_result_free(kksim_result* r) { delete r; }

kksim_status kksim_run_psd(const kksim_scenario* s, const char* stage, unsigned threads,
                           char** csv_out) {
    if (!s || !stage || !csv_out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *csv_out = dup_string(psd_to_csv(dump_psd(s->s, stage, threads))); });
}

kksim_status kksim_sweep_create(const char* json_text, kksim_sweep** out) {
    if (!json_text || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new kksim_sweep{sweep_from_json(json_text)}; });
}

kksim_status kksim_sweep_from_file(const char* path, kksim_sweep** out) {
    if (!path || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        return fail(KKSIM_ERR_IO, e.what());
    }
    return kksim_sweep_create(text.c_str(), out);
}

kksim_status kksim_sweep_set(kksim_sweep* s, const char* dotted_key, const char* value) {
    if (!s || !dotted_key || !value) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string updated = json_set_path(sweep_to_json(s->spec), dotted_key, value);
        s->spec = sweep_from_json(updated);
    });
}

kksim_status kksim_sweep_hash(const kksim_sweep* s, char** out) {
    if (!s || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(scenario_hash(s->spec.base)); });
}

void kksim_sweep_free(kksim_sweep* s) { delete s; }

kksim_status kksim_run_sweep(const kksim_sweep* s, unsigned workers, int keep_going,
                             kksim_sweep_result** out) {
    if (!s || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new kksim_sweep_result{s->spec, run_sweep(s->spec, workers, keep_going != 0)};
    });
}

kksim_status kksim_sweep_result_curve_csv(const kksim_sweep_result* r, char** out) {
    if (!r || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(curve_to_csv(r->spec, r->r)); });
}

kksim_status kksim_sweep_result_summary_json(const kksim_sweep_result* r, char** out) {
    if (!r || !out) return fail(KKSIM_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = dup_string(sweep_summary_to_json(r->spec, r->r)); });
}

void kksim_sweep_result_free(kksim_sweep_result* r) { delete r; }

}  // extern "C"
