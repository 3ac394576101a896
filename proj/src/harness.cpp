#include "kksim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kksim/rng.hpp"

namespace kksim {

using nlohmann::json;

namespace {

unsigned hw_threads() {
    const unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

std::string fmt(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

void Scenario::validate() const {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz: must be > 0");
    try {
        ofdm.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (frames < 1) throw ConfigError("frames: must be >= 1");
    std::size_t i = 0;
    for (const auto& t : tones) {
        const std::string p = "tones." + std::to_string(i) + ".";
        if (t.amplitude < 0.0) throw ConfigError(p + "amplitude: must be >= 0");
        if (!(t.frequency_hz > 0.0)) throw ConfigError(p + "frequency_hz: must be > 0");
        if (!(t.frequency_hz < sample_rate_hz / 2.0))
            throw ConfigError(p + "frequency_hz: must be below Nyquist");
        ++i;
    }
    if (fiber) {
        try {
            fiber->validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("fiber.") + e.what());
        }
    }
    if (noise.snr_db && !std::isfinite(*noise.snr_db))
        throw ConfigError("noise.snr_db: must be finite or null");
    try {
        kk.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (dsbic) {
        try {
            dsbic->validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        for (double f : dsbic->tone_frequencies_hz)
            if (!(f < sample_rate_hz / 2.0))
                throw ConfigError("dsbic.tone_frequencies_hz: must be below Nyquist");
    }
}

void SweepSpec::validate() const {
    base.validate();
    if (values.empty()) throw ConfigError("values: must be non-empty");
    if (axis == SweepAxis::dither_amplitude && base.tones.empty())
        throw ConfigError("values: dither_amplitude axis needs at least one tone in base.tones");
    if (axis == SweepAxis::iterations) {
        for (double v : values)
            if (v < 1.0 || v != std::floor(v))
                throw ConfigError("values: iterations axis needs positive integers");
        if (!base.dsbic) throw ConfigError("base.dsbic: required for the iterations axis");
    }
}

// ---- JSON ------------------------------------------------------------------

namespace {

json tone_to_json(const DitherTone& t) {
    return {{"amplitude", t.amplitude},
            {"frequency_hz", t.frequency_hz},
            {"phase_rad", t.phase_rad}};
}

DitherTone tone_from_json(const json& j) {
    DitherTone t;
    t.amplitude = j.at("amplitude").get<double>();
    t.frequency_hz = j.at("frequency_hz").get<double>();
    t.phase_rad = j.value("phase_rad", 0.0);
    return t;
}

json ofdm_to_json(const OfdmConfig& c) {
    return {{"fft_size", c.fft_size},   {"data_bins", c.data_bins},
            {"start_bin", c.start_bin}, {"cp_len", c.cp_len},
            {"qam_order", c.qam_order}, {"pilot_every", c.pilot_every},
            {"edge_taper", c.edge_taper}, {"payload_symbols", c.payload_symbols}};
}

OfdmConfig ofdm_from_json(const json& j) {
    OfdmConfig c;
    c.fft_size = j.value("fft_size", c.fft_size);
    c.data_bins = j.value("data_bins", c.data_bins);
    c.start_bin = j.value("start_bin", c.start_bin);
    c.cp_len = j.value("cp_len", c.cp_len);
    c.qam_order = j.value("qam_order", c.qam_order);
    c.pilot_every = j.value("pilot_every", c.pilot_every);
    c.edge_taper = j.value("edge_taper", c.edge_taper);
    c.payload_symbols = j.value("payload_symbols", c.payload_symbols);
    return c;
}

json grid_to_json(const ToneGrid& g) {
    return {{"amplitude_values", g.amplitude_values}, {"angle_values", g.angle_values}};
}

ToneGrid grid_from_json(const json& j) {
    ToneGrid g = ToneGrid::make_default();
    if (j.contains("amplitude_values")) g.amplitude_values = j.at("amplitude_values").get<std::vector<double>>();
    if (j.contains("angle_values")) g.angle_values = j.at("angle_values").get<std::vector<double>>();
    return g;
}

json dsbic_to_json(const DsbicConfig& c) {
    return {{"grid", grid_to_json(c.grid)},
            {"iterations", c.iterations},
            {"tone_frequencies_hz", c.tone_frequencies_hz},
            {"alpha_mode", c.alpha_mode == AlphaMode::cross_correlation ? "cross_correlation"
                                                                        : "grid_only"},
            {"objective", c.objective == Objective::training_error ? "training_error"
                                                                   : "decision_error"}};
}

DsbicConfig dsbic_from_json(const json& j) {
    DsbicConfig c;
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    c.iterations = j.value("iterations", c.iterations);
    if (j.contains("tone_frequencies_hz"))
        c.tone_frequencies_hz = j.at("tone_frequencies_hz").get<std::vector<double>>();
    const std::string am = j.value("alpha_mode", "cross_correlation");
    if (am == "cross_correlation")
        c.alpha_mode = AlphaMode::cross_correlation;
    else if (am == "grid_only")
        c.alpha_mode = AlphaMode::grid_only;
    else
        throw ConfigError("dsbic.alpha_mode: unknown value '" + am + "'");
    const std::string ob = j.value("objective", "training_error");
    if (ob == "training_error")
        c.objective = Objective::training_error;
    else if (ob == "decision_error")
        c.objective = Objective::decision_error;
    else
        throw ConfigError("dsbic.objective: unknown value '" + ob + "'");
    return c;
}

json scenario_to_json_obj(const Scenario& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["sample_rate_hz"] = s.sample_rate_hz;
    j["ofdm"] = ofdm_to_json(s.ofdm);
    j["frames"] = s.frames;
    j["cspr_db"] = s.cspr_db;
    j["tones"] = json::array();
    for (const auto& t : s.tones) j["tones"].push_back(tone_to_json(t));
    j["fiber"] = s.fiber ? json{{"length_km", s.fiber->length_km},
                                {"dispersion_ps_nm_km", s.fiber->dispersion_ps_nm_km},
                                {"wavelength_nm", s.fiber->wavelength_nm}}
                         : json(nullptr);
    j["noise"] = {{"snr_db", s.noise.snr_db ? json(*s.noise.snr_db) : json(nullptr)},
                  {"seed", s.noise.seed}};
    j["kk"] = {{"upsample_factor", s.kk.upsample_factor},
               {"clamp_floor_rel", s.kk.clamp_floor_rel}};
    j["dsbic"] = s.dsbic ? dsbic_to_json(*s.dsbic) : json(nullptr);
    j["seed"] = s.seed;
    return j;
}

Scenario scenario_from_json_obj(const json& j) {
    Scenario s;
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        throw ConfigError("schema_version: unsupported");
    s.sample_rate_hz = j.value("sample_rate_hz", s.sample_rate_hz);
    if (j.contains("ofdm")) s.ofdm = ofdm_from_json(j.at("ofdm"));
    s.frames = j.value("frames", s.frames);
    s.cspr_db = j.value("cspr_db", s.cspr_db);
    if (j.contains("tones")) {
        s.tones.clear();
        for (const auto& t : j.at("tones")) s.tones.push_back(tone_from_json(t));
    }
    if (j.contains("fiber") && !j.at("fiber").is_null()) {
        FiberConfig f;
        const json& jf = j.at("fiber");
        f.length_km = jf.value("length_km", f.length_km);
        f.dispersion_ps_nm_km = jf.value("dispersion_ps_nm_km", f.dispersion_ps_nm_km);
        f.wavelength_nm = jf.value("wavelength_nm", f.wavelength_nm);
        s.fiber = f;
    } else {
        s.fiber.reset();
    }
    if (j.contains("noise")) {
        const json& jn = j.at("noise");
        if (jn.contains("snr_db") && !jn.at("snr_db").is_null())
            s.noise.snr_db = jn.at("snr_db").get<double>();
        else
            s.noise.snr_db.reset();
        s.noise.seed = jn.value("seed", s.noise.seed);
    }
    if (j.contains("kk")) {
        s.kk.upsample_factor = j.at("kk").value("upsample_factor", s.kk.upsample_factor);
        s.kk.clamp_floor_rel = j.at("kk").value("clamp_floor_rel", s.kk.clamp_floor_rel);
    }
    if (j.contains("dsbic")) {
        if (j.at("dsbic").is_null())
            s.dsbic.reset();
        else
            s.dsbic = dsbic_from_json(j.at("dsbic"));
    }
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::dither_amplitude: return "dither_amplitude";
        case SweepAxis::snr_db: return "snr_db";
        case SweepAxis::iterations: return "iterations";
        default: return "cspr_db";
    }
}

SweepAxis axis_from_name(const std::string& n) {
    if (n == "dither_amplitude") return SweepAxis::dither_amplitude;
    if (n == "snr_db") return SweepAxis::snr_db;
    if (n == "iterations") return SweepAxis::iterations;
    if (n == "cspr_db") return SweepAxis::cspr_db;
    throw ConfigError("axis: unknown value '" + n + "'");
}

}  // namespace

Scenario scenario_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario json: ") + e.what());
    }
    return scenario_from_json_obj(j);
}

std::string scenario_to_json(const Scenario& s) { return scenario_to_json_obj(s).dump(2); }

SweepSpec sweep_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep json: ") + e.what());
    }
    SweepSpec spec;
    if (!j.contains("base")) throw ConfigError("base: missing");
    spec.base = scenario_from_json_obj(j.at("base"));
    spec.axis = axis_from_name(j.value("axis", "dither_amplitude"));
    if (j.contains("values")) spec.values = j.at("values").get<std::vector<double>>();
    spec.validate();
    return spec;
}

std::string sweep_to_json(const SweepSpec& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["base"] = scenario_to_json_obj(s.base);
    j["axis"] = axis_name(s.axis);
    j["values"] = s.values;
    return j.dump(2);
}

std::string json_set_path(const std::string& json_text, const std::string& dotted_key,
                          const std::string& value) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("json: ") + e.what());
    }
    json val;
    try {
        val = json::parse(value);
    } catch (const json::exception&) {
        val = value;  // bare strings allowed
    }

    std::vector<std::string> keys;
    std::string tok;
    std::istringstream in(dotted_key);
    while (std::getline(in, tok, '.')) {
        if (tok.empty()) throw ConfigError("set: empty path component in '" + dotted_key + "'");
        keys.push_back(tok);
    }
    if (keys.empty()) throw ConfigError("set: empty key");

    json* node = &doc;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        const std::string& k = keys[i];
        if (!k.empty() && k.find_first_not_of("0123456789") == std::string::npos) {
            const std::size_t idx = std::stoul(k);
            if (!node->is_array() || idx >= node->size())
                throw ConfigError("set: index '" + k + "' out of range in '" + dotted_key + "'");
            node = &(*node)[idx];
        } else {
            if (!node->is_object()) throw ConfigError("set: '" + k + "' is not an object");
            node = &(*node)[k];
        }
    }
    const std::string& leaf = keys.back();
    if (!leaf.empty() && leaf.find_first_not_of("0123456789") == std::string::npos &&
        node->is_array()) {
        const std::size_t idx = std::stoul(leaf);
        if (idx >= node->size())
            throw ConfigError("set: index '" + leaf + "' out of range in '" + dotted_key + "'");
        (*node)[idx] = val;
    } else {
        (*node)[leaf] = val;
    }
    return doc.dump(2);
}

std::string scenario_hash(const Scenario& s) {
    const std::string canon = scenario_to_json_obj(s).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

// ---- execution -------------------------------------------------------------

namespace {

struct PipelineState {
    TxFrame frame;
    RealSignal current;
    CarrierEstimate carrier;
    RxChain ctx;
};

PipelineState run_front_end(const Scenario& s, unsigned threads) {
    PipelineState st;
    st.frame = build_tx_frame(s.ofdm, s.frames, s.cspr_db, s.tones, s.seed, s.sample_rate_hz);

    ComplexSignal field = st.frame.field;
    if (s.fiber && s.fiber->length_km > 0.0) field = apply_cd(field, *s.fiber, false);
    if (s.noise.snr_db) {
        NoiseConfig eff = s.noise;
        eff.seed = derive_seed(s.seed, s.noise.seed);
        field = apply_noise(field, eff);
    }
    st.current = photodetect(field);

    const double band_lo =
        static_cast<double>(s.ofdm.start_bin) * s.sample_rate_hz / static_cast<double>(s.ofdm.fft_size);
    const double band_hi = static_cast<double>(s.ofdm.start_bin + s.ofdm.data_bins) *
                           s.sample_rate_hz / static_cast<double>(s.ofdm.fft_size);
    st.carrier = estimate_carrier(st.current, band_lo, band_hi);

    st.ctx.ofdm = s.ofdm;
    st.ctx.frames = s.frames;
    st.ctx.kk = s.kk;
    st.ctx.fiber = s.fiber;
    st.ctx.carrier = st.carrier;
    st.ctx.truth_bits = &st.frame.tx_bits;
    st.ctx.truth_symbols = &st.frame.tx_symbols;
    st.ctx.objective = s.dsbic ? s.dsbic->objective : Objective::training_error;
    st.ctx.threads = threads ? threads : hw_threads();
    return st;
}

PathResult receiver_path(const RealSignal& current, const PipelineState& st) {
    ComplexSignal field = kk_reconstruct(current, st.ctx.kk, st.ctx.carrier);
    if (st.ctx.fiber && st.ctx.fiber->length_km > 0.0) field = apply_cd(field, *st.ctx.fiber, true);
    const std::vector<cplx> raw = ofdm_demodulate(field, st.ctx.ofdm);
    const std::vector<cplx> eq = equalized_payload(raw, st.ctx.ofdm, st.ctx.frames);
    PathResult r;
    r.ber = compute_ber(st.frame.tx_bits, qam16_demap(eq));
    r.evm_db = compute_evm(eq, st.frame.tx_symbols).evm_db;
    return r;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s, unsigned threads) {
    s.validate();
    PipelineState st = run_front_end(s, threads);

    ScenarioResult out;
    out.scenario_hash = scenario_hash(s);
    out.plain = receiver_path(st.current, st);

    if (s.dsbic) {
        DsbicReport rep = dsbic_iterate(st.current, *s.dsbic, st.ctx);
        out.dsbic = receiver_path(rep.corrected_current, st);
        out.dsbic_report = std::move(rep);
    }
    return out;
}

PsdEstimate dump_psd(const Scenario& s, const std::string& stage, unsigned threads) {
    s.validate();
    PipelineState st = run_front_end(s, threads);
    const std::size_t nfft = std::min<std::size_t>(4096, st.current.samples.size());
    if (stage == "tx_field") return psd(st.frame.field, nfft, 0.5);
    if (stage == "rx_current") return psd(st.current, nfft, 0.5);
    if (stage == "corrected_current") {
        if (!s.dsbic) throw ConfigError("dsbic: required for the corrected_current stage");
        DsbicReport rep = dsbic_iterate(st.current, *s.dsbic, st.ctx);
        return psd(rep.corrected_current, nfft, 0.5);
    }
    throw ConfigError("stage: unknown value '" + stage + "'");
}

SweepResult run_sweep(const SweepSpec& spec, unsigned workers, bool keep_going) {
    spec.validate();
    const std::size_t np = spec.values.size();
    if (workers == 0) workers = 1;
    const unsigned grid_threads = std::max(1u, hw_threads() / std::max(1u, workers));

    struct PointOut {
        std::vector<SweepRow> rows;
        std::string error;
    };
    std::vector<PointOut> outs(np);

    auto run_point = [&](std::size_t idx) {
        Scenario s = spec.base;
        const double v = spec.values[idx];
        switch (spec.axis) {
            case SweepAxis::dither_amplitude:
                for (auto& t : s.tones) t.amplitude = v;
                break;
            case SweepAxis::snr_db:
                s.noise.snr_db = v;
                break;
            case SweepAxis::iterations:
                s.dsbic->iterations = static_cast<std::size_t>(v);
                break;
            case SweepAxis::cspr_db:
                s.cspr_db = v;
                break;
        }
        s.noise.seed = derive_seed(spec.base.noise.seed, idx);
        try {
            const ScenarioResult r = run_scenario(s, grid_threads);
            outs[idx].rows.push_back({v, "plain", r.plain.ber, r.plain.evm_db});
            if (r.dsbic) outs[idx].rows.push_back({v, "dsbic", r.dsbic->ber, r.dsbic->evm_db});
        } catch (const std::exception& e) {
            if (!keep_going) throw;
            outs[idx].error = e.what();
        }
    };

    if (workers <= 1 || np <= 1) {
        for (std::size_t i = 0; i < np; ++i) run_point(i);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<std::size_t> next{0};
        const unsigned nw = std::min<unsigned>(workers, static_cast<unsigned>(np));
        for (unsigned w = 0; w < nw; ++w) {
            futs.push_back(std::async(std::launch::async, [&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= np) return;
                    run_point(i);
                }
            }));
        }
        for (auto& f : futs) f.get();
    }

    SweepResult res;
    for (std::size_t i = 0; i < np; ++i) {
        for (auto& r : outs[i].rows) res.rows.push_back(std::move(r));
        if (!outs[i].error.empty())
            res.errors.push_back("value " + fmt(spec.values[i]) + ": " + outs[i].error);
    }
    if (spec.axis == SweepAxis::snr_db) {
        std::vector<double> vs, plain_ber, dsbic_ber;
        bool have_dsbic = false;
        for (double v : spec.values) {
            for (const auto& r : res.rows) {
                if (r.value != v) continue;
                if (r.path == "plain") {
                    vs.push_back(v);
                    plain_ber.push_back(r.ber.ber);
                } else {
                    dsbic_ber.push_back(r.ber.ber);
                    have_dsbic = true;
                }
            }
        }
        if (!vs.empty()) {
            res.plain_sensitivity_db = snr_sensitivity(vs, plain_ber, kHdFecThreshold);
            if (have_dsbic && dsbic_ber.size() == vs.size())
                res.dsbic_sensitivity_db = snr_sensitivity(vs, dsbic_ber, kHdFecThreshold);
        }
    }
    return res;
}

// ---- result serialization ----------------------------------------------------

namespace {
json ber_to_json(const BerReport& b) {
    return {{"bit_errors", b.bit_errors},
            {"bits_total", b.bits_total},
            {"ber", b.ber},
            {"passes_hdfec", b.passes_hdfec}};
}
}  // namespace

std::string summary_to_json(const Scenario& s, const ScenarioResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scenario_hash"] = r.scenario_hash;
    j["scenario"] = json::parse(scenario_to_json(s));
    j["plain"] = ber_to_json(r.plain.ber);
    j["plain"]["evm_db"] = r.plain.evm_db;
    if (r.dsbic) {
        j["dsbic"] = ber_to_json(r.dsbic->ber);
        j["dsbic"]["evm_db"] = r.dsbic->evm_db;
        if (r.dsbic_report) j["dsbic"]["report"] = json::parse(report_to_json(*r.dsbic_report));
    } else {
        j["dsbic"] = nullptr;
    }
    return j.dump(2);
}

std::string sweep_summary_to_json(const SweepSpec& spec, const SweepResult& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["axis"] = axis_name(spec.axis);
    j["values"] = spec.values;
    j["base_hash"] = scenario_hash(spec.base);
    j["rows"] = json::array();
    for (const auto& row : r.rows) {
        json jr = ber_to_json(row.ber);
        jr["value"] = row.value;
        jr["path"] = row.path;
        jr["evm_db"] = row.evm_db;
        j["rows"].push_back(std::move(jr));
    }
    if (spec.axis == SweepAxis::snr_db) {
        j["sensitivity"] = {
            {"plain_snr_db", r.plain_sensitivity_db ? json(*r.plain_sensitivity_db) : json(nullptr)},
            {"dsbic_snr_db", r.dsbic_sensitivity_db ? json(*r.dsbic_sensitivity_db) : json(nullptr)}};
    }
    if (!r.errors.empty()) j["errors"] = r.errors;
    return j.dump(2);
}

std::string curve_to_csv(const SweepSpec& spec, const SweepResult& r) {
    std::string out = "axis,value,path,bit_errors,bits_total,ber,passes_hdfec,evm_db\n";
    for (const auto& row : r.rows) {
        out += axis_name(spec.axis);
        out += ',';
        out += fmt(row.value);
        out += ',';
        out += row.path;
        out += ',';
        out += std::to_string(row.ber.bit_errors);
        out += ',';
        out += std::to_string(row.ber.bits_total);
        out += ',';
        out += fmt(row.ber.ber);
        out += ',';
        out += row.ber.passes_hdfec ? "1" : "0";
        out += ',';
        out += fmt(row.evm_db);
        out += '\n';
    }
    return out;
}

std::vector<SweepRow> curve_from_csv(const std::string& csv) {
    std::vector<SweepRow> rows;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("curve csv: empty");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() != 8) throw std::invalid_argument("curve csv: bad row '" + line + "'");
        SweepRow r;
        r.value = std::stod(f[1]);
        r.path = f[2];
        r.ber.bit_errors = std::stoull(f[3]);
        r.ber.bits_total = std::stoull(f[4]);
        r.ber.ber = std::stod(f[5]);
        r.ber.passes_hdfec = f[6] == "1";
        r.evm_db = std::stod(f[7]);
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {
std::string ensure_dir(const std::string& out_dir, const std::string& hash) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(out_dir) / hash;
    fs::create_directories(dir);
    return dir.string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
}
}  // namespace

std::string write_run_outputs(const std::string& out_dir, const Scenario& s,
                              const ScenarioResult& r) {
    const std::string dir = ensure_dir(out_dir, r.scenario_hash);
    write_file(dir + "/summary.json", summary_to_json(s, r) + "\n");
    return dir;
}

std::string write_sweep_outputs(const std::string& out_dir, const SweepSpec& spec,
                                const SweepResult& r) {
    Scenario base = spec.base;
    const std::string dir = ensure_dir(out_dir, scenario_hash(base));
    write_file(dir + "/curve.csv", curve_to_csv(spec, r));
    write_file(dir + "/summary.json", sweep_summary_to_json(spec, r) + "\n");
    return dir;
}

std::string write_psd_output(const std::string& out_dir, const Scenario& s,
                             const std::string& stage, const PsdEstimate& p) {
    const std::string dir = ensure_dir(out_dir, scenario_hash(s));
    write_file(dir + "/psd_" + stage + ".csv", psd_to_csv(p));
    return dir;
}

}  // namespace kksim
