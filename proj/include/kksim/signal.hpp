#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace kksim {

using cplx = std::complex<double>;

/// Uniformly sampled complex baseband sequence.
struct ComplexSignal {
    std::vector<cplx> samples;
    double sample_rate = 1.0;  // samples per second, > 0

    std::size_t size() const { return samples.size(); }
};

/// Uniformly sampled real sequence (photocurrents, reconstructed distortion).
struct RealSignal {
    std::vector<double> samples;
    double sample_rate = 1.0;

    std::size_t size() const { return samples.size(); }
};

inline void validate(const ComplexSignal& s, const char* what = "signal") {
    if (s.samples.empty()) throw std::invalid_argument(std::string(what) + ": empty");
    if (!(s.sample_rate > 0.0)) throw std::invalid_argument(std::string(what) + ": sample_rate must be > 0");
}

inline void validate(const RealSignal& s, const char* what = "signal") {
    if (s.samples.empty()) throw std::invalid_argument(std::string(what) + ": empty");
    if (!(s.sample_rate > 0.0)) throw std::invalid_argument(std::string(what) + ": sample_rate must be > 0");
}

inline double mean_power(const ComplexSignal& s) {
    double acc = 0.0;
    for (const cplx& v : s.samples) acc += std::norm(v);
    return acc / static_cast<double>(s.samples.size());
}

inline double mean(const RealSignal& s) {
    double acc = 0.0;
    for (double v : s.samples) acc += v;
    return acc / static_cast<double>(s.samples.size());
}

inline cplx mean(const ComplexSignal& s) {
    cplx acc = 0.0;
    for (const cplx& v : s.samples) acc += v;
    return acc / static_cast<double>(s.samples.size());
}

}  // namespace kksim
