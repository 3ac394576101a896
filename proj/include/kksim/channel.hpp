#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "kksim/signal.hpp"

namespace kksim {

struct FiberConfig {
    double length_km = 80.0;
    double dispersion_ps_nm_km = 17.0;
    double wavelength_nm = 1550.0;

    void validate() const {
        if (length_km < 0.0) throw std::invalid_argument("fiber.length_km: must be >= 0");
        if (!(wavelength_nm > 0.0)) throw std::invalid_argument("fiber.wavelength_nm: must be > 0");
    }
};

struct NoiseConfig {
    std::optional<double> snr_db;  // none = noiseless
    std::uint64_t seed = 1;
};

/// Chromatic dispersion: frequency-domain multiply by
/// H(f) = exp(-j*pi*lambda^2*D*L*f^2/c), sign flipped when invert. Unitary.
ComplexSignal apply_cd(const ComplexSignal& field, const FiberConfig& fiber, bool invert = false);

/// Circular complex AWGN on the optical field with total variance
/// mean_power(field) / 10^(snr/10). Deterministic under the seed.
ComplexSignal apply_noise(const ComplexSignal& field, const NoiseConfig& noise);

/// Square-law detection: I[i] = |E[i]|^2.
RealSignal photodetect(const ComplexSignal& field);

/// float64 binary record + JSON sidecar (sample_rate, caller-provided tag).
void save_current(const RealSignal& current, const std::string& bin_path,
                  const std::string& json_path, const std::string& tag);
RealSignal load_current(const std::string& bin_path, const std::string& json_path);

}  // namespace kksim
