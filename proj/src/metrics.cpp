#include "kksim/metrics.hpp"

#include <cmath>

#include "kksim/sigproc.hpp"

namespace kksim {

namespace {
constexpr double kQamScale = 0.31622776601683794;  // 1/sqrt(10)

// axis decision with boundary ties toward the smaller Gray index
// (00 at -2, 01 at 0, 10 at +2; levels -3,-1,+1,+3)
inline int axis_bits(double x) {
    if (x <= -2.0) return 0b00;
    if (x <= 0.0) return 0b01;
    if (x < 2.0) return 0b11;
    return 0b10;
}

inline double axis_level(int gray) {
    switch (gray) {
        case 0b00: return -3.0;
        case 0b01: return -1.0;
        case 0b11: return 1.0;
        default: return 3.0;
    }
}
}  // namespace

std::vector<cplx> ofdm_demodulate(const ComplexSignal& field, const OfdmConfig& cfg) {
    cfg.validate();
    const std::size_t blk = cfg.symbol_len();
    if (field.samples.empty() || field.samples.size() % blk != 0)
        throw std::invalid_argument("ofdm_demodulate: length must be a positive multiple of fft_size+cp_len");
    const std::size_t nsym = field.samples.size() / blk;
    const double scale = std::sqrt(static_cast<double>(cfg.data_bins)) /
                         static_cast<double>(cfg.fft_size);

    std::vector<cplx> out(nsym * cfg.data_bins);
    std::vector<cplx> buf(cfg.fft_size);
    for (std::size_t s = 0; s < nsym; ++s) {
        const cplx* src = field.samples.data() + s * blk + cfg.cp_len;
        buf.assign(src, src + cfg.fft_size);
        dft_inplace(buf, false);
        for (std::size_t k = 0; k < cfg.data_bins; ++k)
            out[s * cfg.data_bins + k] = buf[cfg.start_bin + k] * scale;
    }
    return out;
}

std::vector<cplx> estimate_channel(const std::vector<cplx>& raw_bins, const OfdmConfig& cfg,
                                   std::size_t frames) {
    const std::size_t per_frame = cfg.symbols_per_frame();
    if (raw_bins.size() != frames * per_frame * cfg.data_bins)
        throw std::invalid_argument("estimate_channel: record shape mismatch");
    const std::vector<cplx> train = training_symbols(cfg);

    std::vector<cplx> acc(cfg.data_bins, cplx(0.0, 0.0));
    std::vector<double> cnt(cfg.data_bins, 0.0);
    for (std::size_t f = 0; f < frames; ++f) {
        const cplx* obs = raw_bins.data() + f * per_frame * cfg.data_bins;
        for (std::size_t k = 0; k < cfg.data_bins; ++k) {
            acc[k] += obs[k] / train[k];
            cnt[k] += 1.0;
        }
        if (cfg.pilot_every > 0) {
            for (std::size_t p = 0; p < cfg.payload_symbols; ++p) {
                const cplx* row = obs + (1 + p) * cfg.data_bins;
                for (std::size_t k = 0; k < cfg.data_bins; k += cfg.pilot_every) {
                    acc[k] += row[k] / train[k];
                    cnt[k] += 1.0;
                }
            }
        }
    }
    std::vector<cplx> h(cfg.data_bins);
    for (std::size_t k = 0; k < cfg.data_bins; ++k) h[k] = acc[k] / cnt[k];
    return h;
}

std::vector<cplx> equalized_payload(const std::vector<cplx>& raw_bins, const OfdmConfig& cfg,
                                    std::size_t frames,
                                    const std::vector<cplx>* channel_override) {
    const std::size_t per_frame = cfg.symbols_per_frame();
    if (raw_bins.size() != frames * per_frame * cfg.data_bins)
        throw std::invalid_argument("equalized_payload: record shape mismatch");
    const std::vector<cplx> h =
        channel_override ? *channel_override : estimate_channel(raw_bins, cfg, frames);

    std::vector<cplx> out;
    out.reserve(frames * cfg.payload_symbols * cfg.data_bins_per_payload());
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t p = 0; p < cfg.payload_symbols; ++p) {
            const cplx* row = raw_bins.data() + (f * per_frame + 1 + p) * cfg.data_bins;
            for (std::size_t k = 0; k < cfg.data_bins; ++k) {
                if (cfg.pilot_every > 0 && k % cfg.pilot_every == 0) continue;
                out.push_back(row[k] / h[k]);
            }
        }
    }
    return out;
}

std::vector<std::uint8_t> qam16_demap(const std::vector<cplx>& symbols) {
    std::vector<std::uint8_t> bits(symbols.size() * 4);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const int bi = axis_bits(symbols[i].real() / kQamScale);
        const int bq = axis_bits(symbols[i].imag() / kQamScale);
        bits[4 * i] = static_cast<std::uint8_t>((bi >> 1) & 1);
        bits[4 * i + 1] = static_cast<std::uint8_t>(bi & 1);
        bits[4 * i + 2] = static_cast<std::uint8_t>((bq >> 1) & 1);
        bits[4 * i + 3] = static_cast<std::uint8_t>(bq & 1);
    }
    return bits;
}

BerReport compute_ber(const std::vector<std::uint8_t>& tx_bits,
                      const std::vector<std::uint8_t>& rx_bits) {
    if (tx_bits.size() != rx_bits.size() || tx_bits.empty())
        throw std::invalid_argument("compute_ber: bit sequences must be equal-length and non-empty");
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i)
        if ((tx_bits[i] != 0) != (rx_bits[i] != 0)) ++errors;
    BerReport r;
    r.bit_errors = errors;
    r.bits_total = tx_bits.size();
    r.ber = static_cast<double>(errors) / static_cast<double>(tx_bits.size());
    r.passes_hdfec = r.ber <= kHdFecThreshold;
    return r;
}

EvmReport compute_evm(const std::vector<cplx>& rx_symbols, const std::vector<cplx>& ref_symbols) {
    if (rx_symbols.size() != ref_symbols.size() || rx_symbols.empty())
        throw std::invalid_argument("compute_evm: symbol sequences must be equal-length and non-empty");
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < rx_symbols.size(); ++i) {
        err += std::norm(rx_symbols[i] - ref_symbols[i]);
        ref += std::norm(ref_symbols[i]);
    }
    if (!(ref > 0.0)) throw std::invalid_argument("compute_evm: zero reference power");
    return EvmReport{10.0 * std::log10(std::max(err, 1e-300) / ref)};
}

double decision_directed_mse(const std::vector<cplx>& symbols) {
    if (symbols.empty()) throw std::invalid_argument("decision_directed_mse: empty input");
    double acc = 0.0;
    for (const cplx& s : symbols) {
        const int bi = axis_bits(s.real() / kQamScale);
        const int bq = axis_bits(s.imag() / kQamScale);
        const cplx dec(axis_level(bi) * kQamScale, axis_level(bq) * kQamScale);
        acc += std::norm(s - dec);
    }
    return acc / static_cast<double>(symbols.size());
}

namespace {
double log_ber(double b, double floor_ber) { return std::log(std::max(b, floor_ber)); }
}  // namespace

std::optional<double> snr_sensitivity(const std::vector<double>& snr_db,
                                      const std::vector<double>& ber, double threshold) {
    if (snr_db.size() != ber.size() || snr_db.empty())
        throw std::invalid_argument("snr_sensitivity: shape mismatch");
    const double floor_ber = 1e-12;
    if (ber.front() <= threshold) return snr_db.front();
    for (std::size_t i = 1; i < ber.size(); ++i) {
        if (ber[i] <= threshold) {
            const double b1 = log_ber(ber[i - 1], floor_ber);
            const double b2 = log_ber(ber[i], floor_ber);
            const double bt = std::log(threshold);
            const double t = (b1 == b2) ? 1.0 : (b1 - bt) / (b1 - b2);
            return snr_db[i - 1] + t * (snr_db[i] - snr_db[i - 1]);
        }
    }
    return std::nullopt;
}

std::optional<double> amplitude_crossing(const std::vector<double>& amplitude,
                                         const std::vector<double>& ber, double threshold) {
    if (amplitude.size() != ber.size() || amplitude.empty())
        throw std::invalid_argument("amplitude_crossing: shape mismatch");
    const double floor_ber = 1e-12;
    if (ber.front() > threshold) return amplitude.front();
    for (std::size_t i = 1; i < ber.size(); ++i) {
        if (ber[i] > threshold) {
            const double b1 = log_ber(ber[i - 1], floor_ber);
            const double b2 = log_ber(ber[i], floor_ber);
            const double bt = std::log(threshold);
            const double t = (b1 == b2) ? 0.0 : (bt - b1) / (b2 - b1);
            return amplitude[i - 1] + t * (amplitude[i] - amplitude[i - 1]);
        }
    }
    return std::nullopt;
}

double qam16_ber_approx(double symbol_snr_linear) {
    // 3/4 * Q(sqrt(gamma_s / 5)) for Gray 16-QAM
    const double q_arg = std::sqrt(symbol_snr_linear / 5.0);
    const double q = 0.5 * std::erfc(q_arg / std::sqrt(2.0));
    return 0.75 * q;
}

}  // namespace kksim
