#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "kksim/rng.hpp"
#include "kksim/sigproc.hpp"

using namespace kksim;

namespace {
constexpr double kPi = 3.14159265358979323846;

ComplexSignal random_signal(std::size_t n, std::uint64_t seed, double rate = 1.0) {
    Rng rng(seed);
    ComplexSignal x;
    x.sample_rate = rate;
    x.samples.resize(n);
    for (auto& v : x.samples) v = cplx(rng.next_gaussian(), rng.next_gaussian());
    return x;
}

double max_abs_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}
}  // namespace

TEST_CASE("dft of impulse is flat") {
    ComplexSignal x{{1.0, 0.0, 0.0, 0.0}, 1.0};
    auto X = dft(x);
    for (auto& v : X.samples) CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("dft of constant concentrates in bin zero") {
    ComplexSignal x{{1.0, 1.0, 1.0, 1.0}, 1.0};
    auto X = dft(x);
    CHECK(std::abs(X.samples[0] - cplx(4.0, 0.0)) < 1e-15);
    for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(X.samples[k]) < 1e-15);
}

TEST_CASE("dft round trip, length 64") {
    auto x = random_signal(64, 11);
    auto back = dft(dft(x), true);
    CHECK(max_abs_err(x.samples, back.samples) < 1e-12);
}

TEST_CASE("dft round trip on odd and large lengths") {
    for (std::size_t n : {std::size_t(31), std::size_t(1056), std::size_t(1) << 20}) {
        auto x = random_signal(n, 13 + n);
        auto back = dft(dft(x), true);
        double scale = 0.0;
        for (auto& v : x.samples) scale = std::max(scale, std::abs(v));
        CHECK(max_abs_err(x.samples, back.samples) / scale < 1e-12);
    }
}

TEST_CASE("hilbert maps cos to sin") {
    const std::size_t n = 256;
    RealSignal u, want;
    u.sample_rate = want.sample_rate = 1.0;
    u.samples.resize(n);
    want.samples.resize(n);
    const std::size_t k = 5;
    for (std::size_t i = 0; i < n; ++i) {
        u.samples[i] = std::cos(2.0 * kPi * k * i / n);
        want.samples[i] = std::sin(2.0 * kPi * k * i / n);
    }
    auto h = hilbert_transform(u);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(h.samples[i] - want.samples[i]) < 1e-10);
}

TEST_CASE("hilbert annihilates DC") {
    RealSignal u{std::vector<double>(128, 3.7), 1.0};
    auto h = hilbert_transform(u);
    for (double v : h.samples) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("hilbert matches spectral oracle on random harmonics") {
    const std::size_t n = 512;
    Rng rng(99);
    RealSignal u, want;
    u.sample_rate = want.sample_rate = 1.0;
    u.samples.assign(n, 0.0);
    want.samples.assign(n, 0.0);
    for (int h = 0; h < 3; ++h) {
        const std::size_t k = 3 + rng.next_below(n / 2 - 4);
        const double a = rng.next_gaussian();
        const double b = rng.next_gaussian();
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = 2.0 * kPi * k * i / n;
            u.samples[i] += a * std::cos(ph) + b * std::sin(ph);
            // analytic transform: cos -> sin, sin -> -cos
            want.samples[i] += a * std::sin(ph) - b * std::cos(ph);
        }
    }
    auto got = hilbert_transform(u);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got.samples[i] - want.samples[i]) < 1e-10);
}

TEST_CASE("hilbert is linear") {
    const std::size_t n = 256;
    auto xa = random_signal(n, 3);
    auto xb = random_signal(n, 4);
    RealSignal u, v, w;
    u.sample_rate = v.sample_rate = w.sample_rate = 1.0;
    u.samples.resize(n);
    v.samples.resize(n);
    w.samples.resize(n);
    const double a = 1.7, b = -0.4;
    for (std::size_t i = 0; i < n; ++i) {
        u.samples[i] = xa.samples[i].real();
        v.samples[i] = xb.samples[i].real();
        w.samples[i] = a * u.samples[i] + b * v.samples[i];
    }
    auto hu = hilbert_transform(u);
    auto hv = hilbert_transform(v);
    auto hw = hilbert_transform(w);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(hw.samples[i] - (a * hu.samples[i] + b * hv.samples[i])) < 1e-10);
}

TEST_CASE("hilbert applied twice negates the zero-mean part") {
    const std::size_t n = 128;
    auto x = random_signal(n, 5);
    RealSignal u;
    u.sample_rate = 1.0;
    u.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) u.samples[i] = x.samples[i].real();
    auto hh = hilbert_transform(hilbert_transform(u));
    // remove mean and the Nyquist component from the expectation
    double mu = 0.0, nyq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu += u.samples[i];
        nyq += u.samples[i] * ((i % 2 == 0) ? 1.0 : -1.0);
    }
    mu /= n;
    nyq /= n;
    for (std::size_t i = 0; i < n; ++i) {
        const double want = -(u.samples[i] - mu - nyq * ((i % 2 == 0) ? 1.0 : -1.0));
        CHECK(std::abs(hh.samples[i] - want) < 1e-10);
    }
}

TEST_CASE("resample preserves a pure tone's absolute frequency") {
    const std::size_t n = 200;
    ComplexSignal x;
    x.sample_rate = 1.0;
    x.samples.resize(n);
    const std::size_t k = 20;  // 0.1 * fs
    for (std::size_t i = 0; i < n; ++i)
        x.samples[i] = std::exp(cplx(0.0, 2.0 * kPi * k * i / static_cast<double>(n)));
    auto y = resample(x, 2, 1);
    CHECK(y.sample_rate == doctest::Approx(2.0));
    CHECK(y.samples.size() == 2 * n);
    for (std::size_t i = 0; i < y.samples.size(); ++i) {
        // same absolute frequency at the doubled rate
        const cplx want = std::exp(cplx(0.0, 2.0 * kPi * k * i / static_cast<double>(2 * n)));
        CHECK(std::abs(y.samples[i] - want) < 1e-9);
    }
}

TEST_CASE("resample identity and round trip") {
    auto x = random_signal(300, 21);
    auto same = resample(x, 1, 1);
    CHECK(max_abs_err(x.samples, same.samples) == 0.0);
    auto rt = resample(resample(x, 3, 1), 1, 3);
    CHECK(max_abs_err(x.samples, rt.samples) < 1e-9);
}

TEST_CASE("resample preserves in-band energy for band-limited input") {
    // band-limited: occupy bins [4, 40) of 256
    const std::size_t n = 256;
    Rng rng(7);
    std::vector<cplx> spec(n, cplx(0, 0));
    for (std::size_t k = 4; k < 40; ++k) spec[k] = cplx(rng.next_gaussian(), rng.next_gaussian());
    ComplexSignal x;
    x.sample_rate = 1.0;
    x.samples = spec;
    dft_inplace(x.samples, true);
    const double e_in = mean_power(x) * static_cast<double>(n);
    auto y = resample(x, 2, 1);
    const double e_out = mean_power(y) * static_cast<double>(y.samples.size()) / 2.0;
    CHECK(std::abs(e_out - e_in) / e_in < 1e-6);
}

TEST_CASE("resample rejects impossible factors") {
    auto x = random_signal(10, 1);
    CHECK_THROWS_AS(resample(x, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(resample(x, 1, 3), std::invalid_argument);  // 10/3 not integral
}

TEST_CASE("psd detects a complex tone 30 dB above the median floor") {
    const std::size_t n = 8192;
    ComplexSignal x;
    x.sample_rate = 1000.0;
    x.samples.resize(n);
    const double f0 = 125.0;
    for (std::size_t i = 0; i < n; ++i)
        x.samples[i] = std::exp(cplx(0.0, 2.0 * kPi * f0 * i / x.sample_rate));
    auto p = psd(x, 1024, 0.5);
    const auto it = std::max_element(p.power_db.begin(), p.power_db.end());
    const std::size_t peak = static_cast<std::size_t>(it - p.power_db.begin());
    CHECK(std::abs(p.frequencies[peak] - f0) < 2.0 * x.sample_rate / 1024.0);
    std::vector<double> sorted = p.power_db;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    CHECK(*it - median >= 30.0);
}

TEST_CASE("psd of white noise matches sigma^2/fs within 1 dB") {
    const std::size_t n = 1 << 17;  // > 100 segments at nfft 1024
    const double sigma2 = 0.5;
    Rng rng(123);
    ComplexSignal x;
    x.sample_rate = 2000.0;
    x.samples.resize(n);
    for (auto& v : x.samples)
        v = cplx(rng.next_gaussian(), rng.next_gaussian()) * std::sqrt(sigma2 / 2.0);
    auto p = psd(x, 1024, 0.5);
    double acc = 0.0;
    for (double d : p.power_db) acc += std::pow(10.0, d / 10.0);
    const double mean_density = acc / static_cast<double>(p.power_db.size());
    const double want = sigma2 / x.sample_rate;
    CHECK(std::abs(10.0 * std::log10(mean_density / want)) < 1.0);
}

TEST_CASE("psd of DC-only signal peaks at 0 Hz") {
    ComplexSignal x{std::vector<cplx>(4096, cplx(2.0, 0.0)), 100.0};
    auto p = psd(x, 512, 0.5);
    const auto it = std::max_element(p.power_db.begin(), p.power_db.end());
    CHECK(p.frequencies[static_cast<std::size_t>(it - p.power_db.begin())] == doctest::Approx(0.0));
}

TEST_CASE("psd rejects nfft larger than the record") {
    auto x = random_signal(100, 2);
    CHECK_THROWS_AS(psd(x, 128, 0.5), std::invalid_argument);
}

TEST_CASE("psd frequencies are strictly increasing and csv round-trips") {
    auto x = random_signal(4096, 31, 500.0);
    auto p = psd(x, 256, 0.5);
    for (std::size_t i = 1; i < p.frequencies.size(); ++i)
        CHECK(p.frequencies[i] > p.frequencies[i - 1]);
    auto q = psd_from_csv(psd_to_csv(p));
    REQUIRE(q.frequencies.size() == p.frequencies.size());
    for (std::size_t i = 0; i < p.frequencies.size(); ++i) {
        CHECK(q.frequencies[i] == p.frequencies[i]);
        CHECK(q.power_db[i] == p.power_db[i]);
    }
}
