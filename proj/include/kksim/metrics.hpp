#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kksim/signal.hpp"
#include "kksim/txchain.hpp"

namespace kksim {

constexpr double kHdFecThreshold = 3.8e-3;  // hard-decision FEC limit, inclusive

struct BerReport {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
    bool passes_hdfec = true;
};

struct EvmReport {
    double evm_db = 0.0;  // 20*log10(rms error / rms reference)
};

/// Strip CP, DFT, extract the data bins of each OFDM symbol. No equalization;
/// pass the result through equalize() with a channel estimate for that.
/// The record length must be an integral number of symbols.
std::vector<cplx> ofdm_demodulate(const ComplexSignal& field, const OfdmConfig& cfg);

/// One-tap channel estimate: Y/X per bin, averaged over every training-symbol
/// observation in the framed record (and comb pilot cells when configured).
std::vector<cplx> estimate_channel(const std::vector<cplx>& raw_bins, const OfdmConfig& cfg,
                                   std::size_t frames);

/// Payload symbols of a framed record after one-tap equalization. Comb pilot
/// cells are dropped; output order matches TxFrame::tx_symbols.
std::vector<cplx> equalized_payload(const std::vector<cplx>& raw_bins, const OfdmConfig& cfg,
                                    std::size_t frames,
                                    const std::vector<cplx>* channel_override = nullptr);

/// Hard-decision Gray demap, inverse of qam16_map. Decision boundaries at
/// 0 and +-2/sqrt(10); exact boundary hits round toward the smaller Gray index.
std::vector<std::uint8_t> qam16_demap(const std::vector<cplx>& symbols);

BerReport compute_ber(const std::vector<std::uint8_t>& tx_bits,
                      const std::vector<std::uint8_t>& rx_bits);

EvmReport compute_evm(const std::vector<cplx>& rx_symbols, const std::vector<cplx>& ref_symbols);

/// Mean squared error against the nearest constellation points (blind).
double decision_directed_mse(const std::vector<cplx>& symbols);

/// Interpolated threshold crossing for a BER-vs-SNR sweep (log-linear).
/// Returns the SNR where BER first reaches `threshold` going down; nullopt if
/// the curve never crosses inside the swept range.
std::optional<double> snr_sensitivity(const std::vector<double>& snr_db,
                                      const std::vector<double>& ber, double threshold);

/// Interpolated crossing for a BER-vs-amplitude sweep (BER rising with the
/// axis). Returns nullopt if BER stays at or below the threshold throughout.
std::optional<double> amplitude_crossing(const std::vector<double>& amplitude,
                                         const std::vector<double>& ber, double threshold);

/// Textbook Gray 16-QAM bit error probability approximation at symbol SNR.
double qam16_ber_approx(double symbol_snr_linear);

}  // namespace kksim
