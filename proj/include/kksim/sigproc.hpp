#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kksim/signal.hpp"

namespace kksim {

/// Welch periodogram estimate. Two-sided, frequencies strictly increasing.
struct PsdEstimate {
    std::vector<double> frequencies;  // Hz
    std::vector<double> power_db;     // 10*log10 of power density
    std::size_t nfft = 0;
    double overlap = 0.0;  // segment overlap fraction in [0, 1)
};

/// Discrete Fourier transform, any length. Convention: forward is
/// unnormalized, inverse carries the 1/N factor; inverse(dft(x)) == x.
ComplexSignal dft(const ComplexSignal& x, bool inverse = false);

/// In-place transform on a raw buffer (the workhorse the pipeline uses).
void dft_inplace(std::vector<cplx>& buf, bool inverse);

/// Discrete Hilbert transform via the spectral method: positive frequencies
/// scaled by -j, negative by +j, DC and Nyquist zeroed. H{cos} = sin.
/// Odd-length inputs are zero-padded by one sample internally.
RealSignal hilbert_transform(const RealSignal& u);

/// Rational resampling by FFT zero-padding/truncation (ideal low-pass).
/// Output length is size*up/down, which must be integral.
ComplexSignal resample(const ComplexSignal& x, std::size_t up, std::size_t down);

/// Real-signal convenience wrapper around resample (imaginary part dropped).
RealSignal resample(const RealSignal& x, std::size_t up, std::size_t down);

/// Welch PSD with a periodic Hann window. nfft must not exceed the length.
PsdEstimate psd(const ComplexSignal& x, std::size_t nfft, double overlap = 0.5);
PsdEstimate psd(const RealSignal& x, std::size_t nfft, double overlap = 0.5);

/// Two-column CSV (frequency_hz,power_db), parseable back via psd_from_csv.
std::string psd_to_csv(const PsdEstimate& p);
PsdEstimate psd_from_csv(const std::string& csv);

}  // namespace kksim
