#include "kksim/txchain.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kksim/rng.hpp"
#include "kksim/sigproc.hpp"

namespace kksim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kQamScale = 0.31622776601683794;  // 1/sqrt(10)

// Gray axis: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3
constexpr double kAxisLevel[4] = {-3.0, -1.0, 1.0, 3.0};
constexpr int kAxisGray[4] = {0b00, 0b01, 0b11, 0b10};
}  // namespace

std::size_t OfdmConfig::data_bins_per_payload() const {
    if (pilot_every == 0) return data_bins;
    std::size_t pilots = (data_bins + pilot_every - 1) / pilot_every;
    return data_bins - pilots;
}

void OfdmConfig::validate() const {
    if (fft_size < 4 || (fft_size & (fft_size - 1)) != 0)
        throw std::invalid_argument("ofdm.fft_size: must be a power of two >= 4");
    if (data_bins == 0) throw std::invalid_argument("ofdm.data_bins: must be >= 1");
    if (start_bin < 1) throw std::invalid_argument("ofdm.start_bin: must be >= 1");
    if (start_bin + data_bins > fft_size / 2)
        throw std::invalid_argument("ofdm.start_bin: occupied bins must stay below fft_size/2");
    if (qam_order != 16) throw std::invalid_argument("ofdm.qam_order: only 16 supported");
    if (edge_taper > cp_len)
        throw std::invalid_argument("ofdm.edge_taper: must not exceed cp_len");
    if (pilot_every == 1)
        throw std::invalid_argument("ofdm.pilot_every: spacing 1 leaves no data bins");
}

std::vector<cplx> qam16_map(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 4 != 0)
        throw std::invalid_argument("qam16_map: bit count must be a multiple of 4");
    std::vector<cplx> out(bits.size() / 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int bi = (bits[4 * i] << 1) | bits[4 * i + 1];
        const int bq = (bits[4 * i + 2] << 1) | bits[4 * i + 3];
        double li = 0.0, lq = 0.0;
        for (int k = 0; k < 4; ++k) {
            if (kAxisGray[k] == bi) li = kAxisLevel[k];
            if (kAxisGray[k] == bq) lq = kAxisLevel[k];
        }
        out[i] = cplx(li, lq) * kQamScale;
    }
    return out;
}

cplx training_symbol_value(const OfdmConfig& cfg, std::size_t bin_index) {
    // Fixed pseudo-random QPSK pattern, independent of payload seeding.
    std::uint64_t s = derive_seed(0x7261696E696E67ULL, cfg.fft_size * 131071 + bin_index);
    const std::uint64_t q = splitmix64(s) & 3;
    const double a = kPi / 4.0 + kPi / 2.0 * static_cast<double>(q);
    return cplx(std::cos(a), std::sin(a));
}

std::vector<cplx> training_symbols(const OfdmConfig& cfg) {
    std::vector<cplx> t(cfg.data_bins);
    for (std::size_t i = 0; i < cfg.data_bins; ++i) t[i] = training_symbol_value(cfg, i);
    return t;
}

ComplexSignal ofdm_modulate(const std::vector<cplx>& symbols, const OfdmConfig& cfg,
                            double sample_rate) {
    cfg.validate();
    if (symbols.empty() || symbols.size() % cfg.data_bins != 0)
        throw std::invalid_argument("ofdm_modulate: symbol count must be a positive multiple of data_bins");
    const std::size_t nsym = symbols.size() / cfg.data_bins;
    const std::size_t blk = cfg.symbol_len();
    const std::size_t total = nsym * blk;
    const double scale = static_cast<double>(cfg.fft_size) /
                         std::sqrt(static_cast<double>(cfg.data_bins));

    ComplexSignal out;
    out.sample_rate = sample_rate;
    out.samples.assign(total, cplx(0.0, 0.0));

    const std::size_t taper = cfg.edge_taper;
    std::vector<double> ramp(taper);
    for (std::size_t i = 0; i < taper; ++i)
        ramp[i] = 0.5 * (1.0 - std::cos(kPi * (static_cast<double>(i) + 0.5) /
                                        static_cast<double>(taper)));

    std::vector<cplx> spec(cfg.fft_size);
    for (std::size_t s = 0; s < nsym; ++s) {
        std::fill(spec.begin(), spec.end(), cplx(0.0, 0.0));
        for (std::size_t k = 0; k < cfg.data_bins; ++k)
            spec[cfg.start_bin + k] = symbols[s * cfg.data_bins + k];
        dft_inplace(spec, true);
        for (auto& v : spec) v *= scale;

        // extended block: [cp | body | cyclic suffix of taper samples]
        const std::size_t ext = blk + taper;
        const std::size_t base = s * blk;
        for (std::size_t i = 0; i < ext; ++i) {
            // sample index into the periodic symbol
            const std::size_t idx =
                (i < cfg.cp_len) ? (cfg.fft_size - cfg.cp_len + i)
                                 : ((i - cfg.cp_len) % cfg.fft_size);
            cplx v = spec[idx];
            if (taper > 0) {
                if (i < taper) v *= ramp[i];
                if (i >= ext - taper) v *= ramp[ext - 1 - i];
            }
            out.samples[(base + i) % total] += v;
        }
    }
    return out;
}

ComplexSignal add_carrier(const ComplexSignal& signal, double cspr_db, double* carrier_out) {
    validate(signal, "add_carrier input");
    const double p = mean_power(signal);
    if (!(p > 0.0)) throw std::invalid_argument("add_carrier: zero-power signal");
    const double e0 = std::sqrt(std::pow(10.0, cspr_db / 10.0) * p);
    ComplexSignal out = signal;
    for (auto& v : out.samples) v += e0;
    if (carrier_out) *carrier_out = e0;
    return out;
}

double measure_cspr(const ComplexSignal& field) {
    validate(field, "measure_cspr input");
    if (field.samples.size() < 2)
        throw std::invalid_argument("measure_cspr: need at least 2 samples");
    const cplx mu = mean(field);
    double var = 0.0;
    for (const cplx& v : field.samples) var += std::norm(v - mu);
    var /= static_cast<double>(field.samples.size());
    if (!(var > 0.0)) throw std::invalid_argument("measure_cspr: zero variance (pure carrier)");
    return 10.0 * std::log10(std::norm(mu) / var);
}

ComplexSignal inject_dither(const ComplexSignal& field, const std::vector<DitherTone>& tones,
                            double carrier_amplitude) {
    validate(field, "inject_dither input");
    for (const auto& t : tones) {
        if (t.amplitude < 0.0) throw std::invalid_argument("dither amplitude must be >= 0");
        if (!(t.frequency_hz < field.sample_rate / 2.0))
            throw std::invalid_argument("dither tone at or above Nyquist");
    }
    ComplexSignal out = field;
    for (const auto& t : tones) {
        const double a = t.amplitude * carrier_amplitude;
        if (a == 0.0) continue;
        const double w = 2.0 * kPi * t.frequency_hz / field.sample_rate;
        for (std::size_t i = 0; i < out.samples.size(); ++i)
            out.samples[i] += a * std::cos(w * static_cast<double>(i) + t.phase_rad);
    }
    return out;
}

ComplexSignal ssb_analytic_filter(const ComplexSignal& signal) {
    validate(signal, "ssb filter input");
    std::vector<cplx> X = signal.samples;
    dft_inplace(X, false);
    const std::size_t n = X.size();
    for (std::size_t k = n / 2 + (n % 2 ? 1 : 0); k < n; ++k) X[k] = 0.0;
    if (n % 2 == 0) X[n / 2] = 0.0;
    dft_inplace(X, true);
    ComplexSignal out;
    out.sample_rate = signal.sample_rate;
    out.samples = std::move(X);
    return out;
}

TxFrame build_tx_frame(const OfdmConfig& cfg, std::size_t frames, double cspr_db,
                       const std::vector<DitherTone>& tones, std::uint64_t seed,
                       double sample_rate) {
    cfg.validate();
    if (frames == 0) throw std::invalid_argument("frames must be >= 1");

    const std::size_t payload_bins = cfg.data_bins_per_payload();
    const std::size_t nbits = frames * cfg.payload_symbols * payload_bins * 4;
    Rng rng(derive_seed(seed, 0x62697473ULL));  // "bits" stream
    std::vector<std::uint8_t> bits(nbits);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_bit());
    const std::vector<cplx> data = qam16_map(bits);
    const std::vector<cplx> train = training_symbols(cfg);

    // assemble per-symbol bin vectors: one training symbol then payload
    std::vector<cplx> grid;
    grid.reserve(frames * cfg.symbols_per_frame() * cfg.data_bins);
    std::size_t di = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        grid.insert(grid.end(), train.begin(), train.end());
        for (std::size_t p = 0; p < cfg.payload_symbols; ++p) {
            for (std::size_t k = 0; k < cfg.data_bins; ++k) {
                const bool pilot = cfg.pilot_every > 0 && (k % cfg.pilot_every == 0);
                grid.push_back(pilot ? train[k] : data[di++]);
            }
        }
    }

    ComplexSignal sig = ofdm_modulate(grid, cfg, sample_rate);
    sig = ssb_analytic_filter(sig);
    double e0 = 0.0;
    ComplexSignal field = add_carrier(sig, cspr_db, &e0);
    field = inject_dither(field, tones, e0);

    TxFrame out;
    out.field = std::move(field);
    out.tx_bits = std::move(bits);
    out.tx_symbols = std::move(data);
    out.carrier_amplitude = e0;
    out.config = cfg;
    out.frames = frames;
    return out;
}

namespace {

nlohmann::json ofdm_to_json(const OfdmConfig& c) {
    return {{"fft_size", c.fft_size},       {"data_bins", c.data_bins},
            {"start_bin", c.start_bin},     {"cp_len", c.cp_len},
            {"qam_order", c.qam_order},     {"pilot_every", c.pilot_every},
            {"edge_taper", c.edge_taper},   {"payload_symbols", c.payload_symbols}};
}

OfdmConfig ofdm_from_json(const nlohmann::json& j) {
    OfdmConfig c;
    c.fft_size = j.at("fft_size").get<std::size_t>();
    c.data_bins = j.at("data_bins").get<std::size_t>();
    c.start_bin = j.at("start_bin").get<std::size_t>();
    c.cp_len = j.at("cp_len").get<std::size_t>();
    c.qam_order = j.at("qam_order").get<int>();
    c.pilot_every = j.value("pilot_every", std::size_t(0));
    c.edge_taper = j.value("edge_taper", std::size_t(8));
    c.payload_symbols = j.value("payload_symbols", std::size_t(8));
    return c;
}

template <typename T>
void write_raw(std::ostream& os, const T* data, std::size_t count) {
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_raw(std::istream& is, T* data, std::size_t count) {
    is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
    if (!is) throw std::runtime_error("tx frame file: truncated");
}

}  // namespace

void save_tx_frame(const TxFrame& frame, const std::string& path) {
    nlohmann::json hdr = {
        {"config", ofdm_to_json(frame.config)},
        {"frames", frame.frames},
        {"carrier_amplitude", frame.carrier_amplitude},
        {"sample_rate", frame.field.sample_rate},
        {"field_len", frame.field.samples.size()},
        {"symbol_count", frame.tx_symbols.size()},
        {"bit_count", frame.tx_bits.size()},
    };
    const std::string h = hdr.dump();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os.write("KKTF", 4);
    const std::uint32_t version = 1;
    const std::uint64_t hlen = h.size();
    write_raw(os, &version, 1);
    write_raw(os, &hlen, 1);
    os.write(h.data(), static_cast<std::streamsize>(h.size()));
    write_raw(os, reinterpret_cast<const double*>(frame.field.samples.data()),
              frame.field.samples.size() * 2);
    write_raw(os, reinterpret_cast<const double*>(frame.tx_symbols.data()),
              frame.tx_symbols.size() * 2);
    write_raw(os, frame.tx_bits.data(), frame.tx_bits.size());
    if (!os) throw std::runtime_error("write failed: " + path);
}

TxFrame load_tx_frame(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    char magic[4];
    read_raw(is, magic, 4);
    if (std::memcmp(magic, "KKTF", 4) != 0) throw std::runtime_error("tx frame file: bad magic");
    std::uint32_t version = 0;
    std::uint64_t hlen = 0;
    read_raw(is, &version, 1);
    read_raw(is, &hlen, 1);
    if (version != 1) throw std::runtime_error("tx frame file: unsupported version");
    std::string h(hlen, '\0');
    read_raw(is, h.data(), hlen);
    const nlohmann::json hdr = nlohmann::json::parse(h);

    TxFrame f;
    f.config = ofdm_from_json(hdr.at("config"));
    f.frames = hdr.at("frames").get<std::size_t>();
    f.carrier_amplitude = hdr.at("carrier_amplitude").get<double>();
    f.field.sample_rate = hdr.at("sample_rate").get<double>();
    f.field.samples.resize(hdr.at("field_len").get<std::size_t>());
    f.tx_symbols.resize(hdr.at("symbol_count").get<std::size_t>());
    f.tx_bits.resize(hdr.at("bit_count").get<std::size_t>());
    read_raw(is, reinterpret_cast<double*>(f.field.samples.data()), f.field.samples.size() * 2);
    read_raw(is, reinterpret_cast<double*>(f.tx_symbols.data()), f.tx_symbols.size() * 2);
    read_raw(is, f.tx_bits.data(), f.tx_bits.size());
    return f;
}

void save_bits(const std::vector<std::uint8_t>& bits, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    for (auto b : bits) os.put(b ? '1' : '0');
    os.put('\n');
}

std::vector<std::uint8_t> load_bits(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::vector<std::uint8_t> bits;
    char c;
    while (is.get(c)) {
        if (c == '0')
            bits.push_back(0);
        else if (c == '1')
            bits.push_back(1);
        else if (c == '\n' || c == '\r')
            continue;
        else
            throw std::runtime_error("bit file: unexpected character");
    }
    return bits;
}

}  // namespace kksim
