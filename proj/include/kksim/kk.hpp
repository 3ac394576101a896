#pragma once

#include "kksim/signal.hpp"

namespace kksim {

struct KkConfig {
    std::size_t upsample_factor = 3;  // spectral headroom for the sqrt/log nonlinearities
    double clamp_floor_rel = 1e-9;    // log floor, relative to mean(current)

    void validate() const {
        if (upsample_factor < 1) throw std::invalid_argument("kk.upsample_factor: must be >= 1");
        if (!(clamp_floor_rel > 0.0))
            throw std::invalid_argument("kk.clamp_floor_rel: must be > 0");
    }
};

struct CarrierEstimate {
    double amplitude = 0.0;  // estimated E0, >= 0
};

/// Carrier amplitude from the photocurrent DC statistics. The plain mode is
/// sqrt(mean(current)), biased high by O(1/CSPR).
CarrierEstimate estimate_carrier(const RealSignal& current);

/// Bias-corrected mode: the in-band PSD integral over |f| in
/// [band_lo, band_hi] estimates the signal-carrier beat power, giving
/// carrier power C = (mu + sqrt(mu^2 - 2*P_band)) / 2.
CarrierEstimate estimate_carrier(const RealSignal& current, double band_lo_hz,
                                 double band_hi_hz);

/// Phase retrieval at the upsampled rate: E(t) = sqrt(I) * exp(j*H{log(I)/2})
/// on the clamped, upsampled current. Magnitude equals sqrt(clamped I)
/// pointwise by construction.
ComplexSignal kk_phase_retrieve_upsampled(const RealSignal& current, const KkConfig& cfg);

/// Full reconstruction: upsample, phase retrieval, downsample to the input
/// rate, subtract the carrier. Returns the recovered signal field E_s'.
ComplexSignal kk_reconstruct(const RealSignal& current, const KkConfig& cfg,
                             const CarrierEstimate& carrier);

}  // namespace kksim
