#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kksim/channel.hpp"
#include "kksim/dsbic.hpp"
#include "kksim/kk.hpp"
#include "kksim/metrics.hpp"
#include "kksim/sigproc.hpp"
#include "kksim/txchain.hpp"

namespace kksim {

constexpr int kSchemaVersion = 1;

/// Invalid configuration, message carries the offending field path.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One end-to-end experiment: transmitter, channel, and both receiver paths.
struct Scenario {
    double sample_rate_hz = 64e9;
    OfdmConfig ofdm;
    std::size_t frames = 4;
    double cspr_db = 9.0;
    std::vector<DitherTone> tones = {{0.02, 2.0e7, 0.0}, {0.02, 5.2e7, 0.0}};
    std::optional<FiberConfig> fiber;  // nullopt = back-to-back
    NoiseConfig noise;
    KkConfig kk;
    std::optional<DsbicConfig> dsbic = DsbicConfig{};  // nullopt = plain KK only
    std::uint64_t seed = 42;

    void validate() const;
};

enum class SweepAxis { dither_amplitude, snr_db, iterations, cspr_db };

struct SweepSpec {
    Scenario base;
    SweepAxis axis = SweepAxis::dither_amplitude;
    std::vector<double> values;

    void validate() const;
};

struct PathResult {
    BerReport ber;
    double evm_db = 0.0;
};

struct ScenarioResult {
    std::string scenario_hash;
    PathResult plain;
    std::optional<PathResult> dsbic;
    std::optional<DsbicReport> dsbic_report;
};

struct SweepRow {
    double value = 0.0;
    std::string path;  // "plain" or "dsbic"
    BerReport ber;
    double evm_db = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<double> plain_sensitivity_db;  // only for the snr_db axis
    std::optional<double> dsbic_sensitivity_db;
    std::vector<std::string> errors;  // non-empty only with keep_going
};

// ---- JSON round trip -------------------------------------------------------

Scenario scenario_from_json(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);
SweepSpec sweep_from_json(const std::string& json_text);
std::string sweep_to_json(const SweepSpec& s);

/// Applies a dotted-path override ("dsbic.iterations=3", "tones.0.amplitude")
/// to a scenario or sweep JSON document. Numeric path tokens index arrays.
std::string json_set_path(const std::string& json_text, const std::string& dotted_key,
                          const std::string& value);

/// FNV-1a hash of the canonical JSON form, as 16 hex characters.
std::string scenario_hash(const Scenario& s);

// ---- execution -------------------------------------------------------------

/// Runs transmitter -> channel -> photodetection once, then both receiver
/// paths on the identical photocurrent record. Deterministic under the seed.
ScenarioResult run_scenario(const Scenario& s, unsigned threads = 0);

/// One row per axis value per receiver path. Points run concurrently up to
/// `workers`; each point derives its own noise stream from seed + axis index.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = 1, bool keep_going = false);

/// PSD at a pipeline stage: "tx_field", "rx_current" or "corrected_current".
PsdEstimate dump_psd(const Scenario& s, const std::string& stage, unsigned threads = 0);

// ---- serialization of results ----------------------------------------------

std::string summary_to_json(const Scenario& s, const ScenarioResult& r);
std::string sweep_summary_to_json(const SweepSpec& spec, const SweepResult& r);
std::string curve_to_csv(const SweepSpec& spec, const SweepResult& r);
std::vector<SweepRow> curve_from_csv(const std::string& csv);

/// Writes summary/curve/psd artifacts under out_dir/<hash>/ and returns that
/// directory path.
std::string write_run_outputs(const std::string& out_dir, const Scenario& s,
                              const ScenarioResult& r);
std::string write_sweep_outputs(const std::string& out_dir, const SweepSpec& spec,
                                const SweepResult& r);
std::string write_psd_output(const std::string& out_dir, const Scenario& s,
                             const std::string& stage, const PsdEstimate& p);

}  // namespace kksim
