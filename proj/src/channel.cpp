#include "kksim/channel.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kksim/rng.hpp"
#include "kksim/sigproc.hpp"

namespace kksim {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kC = 299792458.0;  // m/s
}  // namespace

ComplexSignal apply_cd(const ComplexSignal& field, const FiberConfig& fiber, bool invert) {
    validate(field, "apply_cd input");
    fiber.validate();
    if (fiber.length_km == 0.0) return field;

    const std::size_t n = field.samples.size();
    const double lambda = fiber.wavelength_nm * 1e-9;
    const double d_si = fiber.dispersion_ps_nm_km * 1e-6;  // s/m^2
    const double len = fiber.length_km * 1e3;
    const double coeff = (invert ? 1.0 : -1.0) * kPi * lambda * lambda * d_si * len / kC;

    std::vector<cplx> X = field.samples;
    dft_inplace(X, false);
    for (std::size_t k = 0; k < n; ++k) {
        // two-sided bin frequency
        const double kk = (k <= n / 2) ? static_cast<double>(k)
                                       : static_cast<double>(k) - static_cast<double>(n);
        const double f = kk * field.sample_rate / static_cast<double>(n);
        const double ph = coeff * f * f;
        X[k] *= cplx(std::cos(ph), std::sin(ph));
    }
    dft_inplace(X, true);
    ComplexSignal out;
    out.sample_rate = field.sample_rate;
    out.samples = std::move(X);
    return out;
}

ComplexSignal apply_noise(const ComplexSignal& field, const NoiseConfig& noise) {
    validate(field, "apply_noise input");
    if (!noise.snr_db) return field;
    const double p = mean_power(field);
    const double nv = p / std::pow(10.0, *noise.snr_db / 10.0);
    const double sigma = std::sqrt(nv / 2.0);
    Rng rng(derive_seed(noise.seed, 0x6E6F697365ULL));  // "noise" stream
    ComplexSignal out = field;
    for (auto& v : out.samples) {
        const double re = rng.next_gaussian();
        const double im = rng.next_gaussian();
        v += cplx(sigma * re, sigma * im);
    }
    return out;
}

RealSignal photodetect(const ComplexSignal& field) {
    validate(field, "photodetect input");
    RealSignal out;
    out.sample_rate = field.sample_rate;
    out.samples.resize(field.samples.size());
    for (std::size_t i = 0; i < field.samples.size(); ++i)
        out.samples[i] = std::norm(field.samples[i]);
    return out;
}

void save_current(const RealSignal& current, const std::string& bin_path,
                  const std::string& json_path, const std::string& tag) {
    std::ofstream os(bin_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + bin_path);
    os.write(reinterpret_cast<const char*>(current.samples.data()),
             static_cast<std::streamsize>(current.samples.size() * sizeof(double)));
    nlohmann::json side = {{"sample_rate", current.sample_rate},
                           {"length", current.samples.size()},
                           {"tag", tag}};
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("cannot write " + json_path);
    js << side.dump(2) << '\n';
}

RealSignal load_current(const std::string& bin_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw std::runtime_error("cannot read " + json_path);
    nlohmann::json side = nlohmann::json::parse(js);
    RealSignal out;
    out.sample_rate = side.at("sample_rate").get<double>();
    out.samples.resize(side.at("length").get<std::size_t>());
    std::ifstream is(bin_path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + bin_path);
    is.read(reinterpret_cast<char*>(out.samples.data()),
            static_cast<std::streamsize>(out.samples.size() * sizeof(double)));
    if (!is) throw std::runtime_error("current file: truncated");
    return out;
}

}  // namespace kksim
