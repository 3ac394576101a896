#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kksim/signal.hpp"

namespace kksim {

/// OFDM frame geometry. Data occupies a contiguous positive-frequency bin
/// range, so the baseband is single-sideband by construction.
struct OfdmConfig {
    std::size_t fft_size = 1024;
    std::size_t data_bins = 316;      // occupied subcarriers per symbol
    std::size_t start_bin = 16;       // first occupied bin (guard gap above DC)
    std::size_t cp_len = 32;          // cyclic prefix samples
    int qam_order = 16;
    std::size_t pilot_every = 0;      // comb pilot spacing in payload symbols, 0 = off
    std::size_t edge_taper = 8;       // raised-cosine overlap length, 0 = plain CP
    std::size_t payload_symbols = 8;  // payload OFDM symbols per frame (after the training symbol)

    std::size_t symbol_len() const { return fft_size + cp_len; }
    std::size_t symbols_per_frame() const { return 1 + payload_symbols; }
    /// Data-carrying bins per payload symbol (comb pilots excluded).
    std::size_t data_bins_per_payload() const;
    std::size_t bits_per_payload_symbol() const { return data_bins_per_payload() * 4; }

    void validate() const;
};

/// One bias-dither tone. Amplitude is carrier-relative: the injected field
/// term is amplitude * E0 * cos(2*pi*f*t + phase).
struct DitherTone {
    double amplitude = 0.0;  // fraction of the carrier amplitude, >= 0
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
};

/// Assembled transmit record: carrier + SSB OFDM signal + dither tones.
struct TxFrame {
    ComplexSignal field;
    std::vector<std::uint8_t> tx_bits;
    std::vector<cplx> tx_symbols;  // payload data symbols, frame-major
    double carrier_amplitude = 0.0;
    OfdmConfig config;
    std::size_t frames = 0;
};

/// Gray-coded 16-QAM on the {-3,-1,+1,+3}^2 grid, scaled by 1/sqrt(10) for
/// unit mean power. Per axis (2 bits, MSB first): 00 -> -3, 01 -> -1,
/// 11 -> +1, 10 -> +3. First bit pair maps to I, second to Q.
std::vector<cplx> qam16_map(const std::vector<std::uint8_t>& bits);

/// The known QPSK training/pilot value for a data bin (fixed pattern).
cplx training_symbol_value(const OfdmConfig& cfg, std::size_t bin_index);
std::vector<cplx> training_symbols(const OfdmConfig& cfg);

/// Per OFDM symbol: data on the configured bins, zeros elsewhere, inverse
/// DFT, cyclic prefix. With edge_taper > 0 symbols are joined by
/// raised-cosine overlap-add inside the CP margin (record length unchanged).
ComplexSignal ofdm_modulate(const std::vector<cplx>& symbols, const OfdmConfig& cfg,
                            double sample_rate);

/// Adds a real positive carrier E0 with 10*log10(E0^2 / mean|signal|^2) == cspr_db.
ComplexSignal add_carrier(const ComplexSignal& signal, double cspr_db, double* carrier_out);

/// CSPR from field statistics: 10*log10(|mean|^2 / variance).
double measure_cspr(const ComplexSignal& field);

/// Adds dither tones to the field; amplitudes scale with carrier_amplitude.
ComplexSignal inject_dither(const ComplexSignal& field, const std::vector<DitherTone>& tones,
                            double carrier_amplitude);

/// Zeroes strictly-negative frequency bins of the record (band-limited SSB
/// transmitter front end). Applied by the frame builder before the carrier.
ComplexSignal ssb_analytic_filter(const ComplexSignal& signal);

/// Full transmit chain: seeded bits -> 16-QAM -> framed OFDM with one
/// training symbol per frame -> SSB filter -> carrier at cspr_db -> dither.
TxFrame build_tx_frame(const OfdmConfig& cfg, std::size_t frames, double cspr_db,
                       const std::vector<DitherTone>& tones, std::uint64_t seed,
                       double sample_rate);

/// Binary container round-trip (header JSON + interleaved float64 I/Q).
void save_tx_frame(const TxFrame& frame, const std::string& path);
TxFrame load_tx_frame(const std::string& path);

/// Flat ASCII bit file ('0'/'1' per bit).
void save_bits(const std::vector<std::uint8_t>& bits, const std::string& path);
std::vector<std::uint8_t> load_bits(const std::string& path);

}  // namespace kksim
