#include "kksim/kk.hpp"

#include <cmath>

#include "kksim/sigproc.hpp"

namespace kksim {

CarrierEstimate estimate_carrier(const RealSignal& current) {
    validate(current, "estimate_carrier input");
    const double mu = mean(current);
    if (mu < 0.0) throw std::invalid_argument("estimate_carrier: negative mean photocurrent");
    return CarrierEstimate{std::sqrt(mu)};
}

CarrierEstimate estimate_carrier(const RealSignal& current, double band_lo_hz,
                                 double band_hi_hz) {
    validate(current, "estimate_carrier input");
    const double mu = mean(current);
    if (mu < 0.0) throw std::invalid_argument("estimate_carrier: negative mean photocurrent");
    if (mu == 0.0) return CarrierEstimate{0.0};

    const std::size_t n = current.samples.size();
    std::vector<cplx> X(current.samples.begin(), current.samples.end());
    dft_inplace(X, false);
    double p_band = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = (k <= n / 2) ? static_cast<double>(k)
                                       : static_cast<double>(k) - static_cast<double>(n);
        const double f = std::abs(kk) * current.sample_rate / static_cast<double>(n);
        if (f >= band_lo_hz && f <= band_hi_hz)
            p_band += std::norm(X[k]) / (static_cast<double>(n) * static_cast<double>(n));
    }
    // mean(I) = C + Ps and P_band ~ 2*C*Ps  =>  C = (mu + sqrt(mu^2 - 2 P_band))/2
    const double disc = mu * mu - 2.0 * p_band;
    if (disc <= 0.0) return CarrierEstimate{std::sqrt(mu / 2.0)};
    return CarrierEstimate{std::sqrt((mu + std::sqrt(disc)) / 2.0)};
}

ComplexSignal kk_phase_retrieve_upsampled(const RealSignal& current, const KkConfig& cfg) {
    validate(current, "kk input");
    cfg.validate();

    RealSignal up = (cfg.upsample_factor > 1) ? resample(current, cfg.upsample_factor, 1)
                                              : current;
    const double floor = cfg.clamp_floor_rel * std::max(mean(current), 0.0);
    const double floor_eff = (floor > 0.0) ? floor : cfg.clamp_floor_rel;

    const std::size_t n = up.samples.size();
    RealSignal halflog;
    halflog.sample_rate = up.sample_rate;
    halflog.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (up.samples[i] < floor_eff) up.samples[i] = floor_eff;
        halflog.samples[i] = 0.5 * std::log(up.samples[i]);
    }
    const RealSignal phase = hilbert_transform(halflog);

    ComplexSignal field;
    field.sample_rate = up.sample_rate;
    field.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::sqrt(up.samples[i]);
        field.samples[i] = cplx(mag * std::cos(phase.samples[i]),
                                mag * std::sin(phase.samples[i]));
    }
    return field;
}

ComplexSignal kk_reconstruct(const RealSignal& current, const KkConfig& cfg,
                             const CarrierEstimate& carrier) {
    ComplexSignal field = kk_phase_retrieve_upsampled(current, cfg);
    if (cfg.upsample_factor > 1) field = resample(field, 1, cfg.upsample_factor);
    for (auto& v : field.samples) v -= carrier.amplitude;
    return field;
}

}  // namespace kksim
