#include "kksim/sigproc.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace kksim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW plans are cached per (length, direction). Planning is not thread-safe,
// execution via the new-array interface is. FFTW_UNALIGNED lifts the SIMD
// alignment requirement so plans run on arbitrary caller buffers.
class FftPlanCache {
public:
    static FftPlanCache& instance() {
        static FftPlanCache c;
        return c;
    }

    fftw_plan get(std::size_t n, bool inverse) {
        const std::uint64_t key = (static_cast<std::uint64_t>(n) << 1) | (inverse ? 1 : 0);
        std::lock_guard<std::mutex> lock(mu_);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> probe_in(n), probe_out(n);
        fftw_plan p = fftw_plan_dft_1d(
            static_cast<int>(n), reinterpret_cast<fftw_complex*>(probe_in.data()),
            reinterpret_cast<fftw_complex*>(probe_out.data()),
            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    std::mutex mu_;
    std::unordered_map<std::uint64_t, fftw_plan> plans_;
};

void execute_dft(const cplx* in, cplx* out, std::size_t n, bool inverse) {
    fftw_plan p = FftPlanCache::instance().get(n, inverse);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    if (inverse) {
        const double s = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] *= s;
    }
}

std::vector<cplx> spectrum_resize(const std::vector<cplx>& X, std::size_t m) {
    // Keeps the shared band: non-negative bins at the head, negative bins at
    // the tail. An even shared length has a Nyquist bin, split in two on
    // upsample and folded back together (aliased) on downsample.
    const std::size_t n = X.size();
    std::vector<cplx> Y(m, cplx(0.0, 0.0));
    const std::size_t h = std::min(n, m);
    const std::size_t pos = (h % 2 == 0) ? h / 2 : (h + 1) / 2;
    const std::size_t neg = (h % 2 == 0) ? h / 2 - 1 : (h - 1) / 2;
    for (std::size_t k = 0; k < pos; ++k) Y[k] = X[k];
    for (std::size_t j = 1; j <= neg; ++j) Y[m - j] = X[n - j];
    if (h % 2 == 0) {
        if (m > n) {
            Y[h / 2] = 0.5 * X[h / 2];
            Y[m - h / 2] += 0.5 * X[h / 2];
        } else if (m < n) {
            Y[h / 2] = X[h / 2] + X[n - h / 2];
        }
    }
    return Y;
}

}  // namespace

ComplexSignal dft(const ComplexSignal& x, bool inverse) {
    validate(x, "dft input");
    ComplexSignal out;
    out.sample_rate = x.sample_rate;
    out.samples.resize(x.samples.size());
    execute_dft(x.samples.data(), out.samples.data(), x.samples.size(), inverse);
    return out;
}

void dft_inplace(std::vector<cplx>& buf, bool inverse) {
    if (buf.empty()) throw std::invalid_argument("dft: empty buffer");
    std::vector<cplx> tmp(buf.size());
    execute_dft(buf.data(), tmp.data(), buf.size(), inverse);
    buf.swap(tmp);
}

RealSignal hilbert_transform(const RealSignal& u) {
    validate(u, "hilbert input");
    const std::size_t n0 = u.samples.size();
    const std::size_t n = (n0 % 2 == 0) ? n0 : n0 + 1;
    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n0; ++i) buf[i] = u.samples[i];
    dft_inplace(buf, false);
    const std::size_t half = n / 2;
    buf[0] = 0.0;
    buf[half] = 0.0;  // n is even here
    for (std::size_t k = 1; k < half; ++k) buf[k] *= cplx(0.0, -1.0);
    for (std::size_t k = half + 1; k < n; ++k) buf[k] *= cplx(0.0, 1.0);
    dft_inplace(buf, true);
    RealSignal out;
    out.sample_rate = u.sample_rate;
    out.samples.resize(n0);
    for (std::size_t i = 0; i < n0; ++i) out.samples[i] = buf[i].real();
    return out;
}

ComplexSignal resample(const ComplexSignal& x, std::size_t up, std::size_t down) {
    validate(x, "resample input");
    if (up == 0 || down == 0) throw std::invalid_argument("resample: factors must be >= 1");
    const std::size_t n = x.samples.size();
    if (up > 1 && n > (static_cast<std::size_t>(1) << 52) / up)
        throw std::invalid_argument("resample: up*length overflow");
    if ((n * up) % down != 0)
        throw std::invalid_argument("resample: length*up must be divisible by down");
    if (up == down) {
        ComplexSignal out = x;
        return out;
    }
    const std::size_t m = n * up / down;
    if (m == 0) throw std::invalid_argument("resample: empty output");
    std::vector<cplx> X = x.samples;
    dft_inplace(X, false);
    std::vector<cplx> Y = spectrum_resize(X, m);
    dft_inplace(Y, true);
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    ComplexSignal out;
    out.sample_rate = x.sample_rate * static_cast<double>(up) / static_cast<double>(down);
    out.samples.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.samples[i] = Y[i] * scale;
    return out;
}

RealSignal resample(const RealSignal& x, std::size_t up, std::size_t down) {
    ComplexSignal cx;
    cx.sample_rate = x.sample_rate;
    cx.samples.assign(x.samples.begin(), x.samples.end());
    ComplexSignal cy = resample(cx, up, down);
    RealSignal out;
    out.sample_rate = cy.sample_rate;
    out.samples.resize(cy.samples.size());
    for (std::size_t i = 0; i < cy.samples.size(); ++i) out.samples[i] = cy.samples[i].real();
    return out;
}

PsdEstimate psd(const ComplexSignal& x, std::size_t nfft, double overlap) {
    validate(x, "psd input");
    const std::size_t n = x.samples.size();
    if (nfft == 0 || nfft > n) throw std::invalid_argument("psd: nfft must be in [1, length]");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("psd: overlap must be in [0,1)");

    std::vector<double> win(nfft);
    double wss = 0.0;
    for (std::size_t i = 0; i < nfft; ++i) {
        win[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(nfft)));
        wss += win[i] * win[i];
    }
    std::size_t hop = nfft - static_cast<std::size_t>(std::floor(overlap * static_cast<double>(nfft)));
    if (hop == 0) hop = 1;

    std::vector<double> acc(nfft, 0.0);
    std::vector<cplx> seg(nfft);
    std::size_t count = 0;
    for (std::size_t start = 0; start + nfft <= n; start += hop) {
        for (std::size_t i = 0; i < nfft; ++i) seg[i] = x.samples[start + i] * win[i];
        dft_inplace(seg, false);
        for (std::size_t i = 0; i < nfft; ++i) acc[i] += std::norm(seg[i]);
        ++count;
        if (start + nfft == n) break;
    }
    const double scale = 1.0 / (static_cast<double>(count) * x.sample_rate * wss);

    PsdEstimate out;
    out.nfft = nfft;
    out.overlap = overlap;
    out.frequencies.resize(nfft);
    out.power_db.resize(nfft);
    const std::size_t half = nfft / 2;
    for (std::size_t i = 0; i < nfft; ++i) {
        // fftshift so frequencies ascend from -fs/2
        const std::size_t src = (i + nfft - half) % nfft;
        const double k = static_cast<double>(static_cast<std::ptrdiff_t>(i) -
                                             static_cast<std::ptrdiff_t>(half));
        out.frequencies[i] = k * x.sample_rate / static_cast<double>(nfft);
        const double d = std::max(acc[src] * scale, 1e-300);
        out.power_db[i] = 10.0 * std::log10(d);
    }
    return out;
}

PsdEstimate psd(const RealSignal& x, std::size_t nfft, double overlap) {
    ComplexSignal cx;
    cx.sample_rate = x.sample_rate;
    cx.samples.assign(x.samples.begin(), x.samples.end());
    return psd(cx, nfft, overlap);
}

namespace {
std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
}  // namespace

std::string psd_to_csv(const PsdEstimate& p) {
    std::string out = "frequency_hz,power_db\n";
    for (std::size_t i = 0; i < p.frequencies.size(); ++i) {
        out += format_double(p.frequencies[i]);
        out += ',';
        out += format_double(p.power_db[i]);
        out += '\n';
    }
    return out;
}

PsdEstimate psd_from_csv(const std::string& csv) {
    PsdEstimate p;
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("psd csv: empty");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("psd csv: bad row");
        p.frequencies.push_back(std::stod(line.substr(0, comma)));
        p.power_db.push_back(std::stod(line.substr(comma + 1)));
    }
    return p;
}

}  // namespace kksim
