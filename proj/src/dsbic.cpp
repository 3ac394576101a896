#include "kksim/dsbic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "kksim/sigproc.hpp"

namespace kksim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ToneGrid ToneGrid::make_default() {
    ToneGrid g;
    g.amplitude_values.resize(25);
    for (std::size_t i = 0; i < 25; ++i) g.amplitude_values[i] = 0.02 * static_cast<double>(i);
    g.angle_values.resize(12);
    for (std::size_t i = 0; i < 12; ++i) g.angle_values[i] = 0.52 * static_cast<double>(i);
    return g;
}

void ToneGrid::validate() const {
    if (amplitude_values.empty() || angle_values.empty())
        throw std::invalid_argument("dsbic.grid: value lists must be non-empty");
    for (std::size_t i = 1; i < amplitude_values.size(); ++i)
        if (!(amplitude_values[i] > amplitude_values[i - 1]))
            throw std::invalid_argument("dsbic.grid.amplitude_values: must be strictly increasing");
    for (std::size_t i = 1; i < angle_values.size(); ++i)
        if (!(angle_values[i] > angle_values[i - 1]))
            throw std::invalid_argument("dsbic.grid.angle_values: must be strictly increasing");
    if (amplitude_values.front() < 0.0)
        throw std::invalid_argument("dsbic.grid.amplitude_values: must be >= 0");
}

void DsbicConfig::validate() const {
    grid.validate();
    if (iterations < 1) throw std::invalid_argument("dsbic.iterations: must be >= 1");
    if (tone_frequencies_hz.empty())
        throw std::invalid_argument("dsbic.tone_frequencies_hz: must name at least one tone");
    for (double f : tone_frequencies_hz)
        if (!(f > 0.0)) throw std::invalid_argument("dsbic.tone_frequencies_hz: must be > 0");
}

ScoreResult score_corrected_current(const RealSignal& current, const RxChain& ctx) {
    ComplexSignal field = kk_reconstruct(current, ctx.kk, ctx.carrier);
    if (ctx.fiber && ctx.fiber->length_km > 0.0) field = apply_cd(field, *ctx.fiber, true);
    const std::vector<cplx> raw = ofdm_demodulate(field, ctx.ofdm);
    const std::vector<cplx> eq = equalized_payload(raw, ctx.ofdm, ctx.frames);

    ScoreResult r;
    const bool have_truth = ctx.truth_bits != nullptr && ctx.truth_symbols != nullptr;
    if (have_truth) {
        const BerReport ber = compute_ber(*ctx.truth_bits, qam16_demap(eq));
        r.ber = ber.ber;
        r.evm_db = compute_evm(eq, *ctx.truth_symbols).evm_db;
        double mse = 0.0;
        for (std::size_t i = 0; i < eq.size(); ++i) mse += std::norm(eq[i] - (*ctx.truth_symbols)[i]);
        mse /= static_cast<double>(eq.size());
        if (ctx.objective == Objective::training_error) {
            r.objective = {ber.ber, mse};
        } else {
            r.objective = {decision_directed_mse(eq), 0.0};
        }
    } else {
        r.objective = {decision_directed_mse(eq), 0.0};
        r.evm_db = 0.0;
    }
    return r;
}

RealSignal reconstruct_distortion(const ComplexSignal& es_prime, const CarrierEstimate& carrier,
                                  const DitherTone& tone) {
    validate(es_prime, "reconstruct_distortion input");
    if (!(tone.frequency_hz < es_prime.sample_rate / 2.0))
        throw std::invalid_argument("reconstruct_distortion: tone at or above Nyquist");
    const double e0 = carrier.amplitude;
    const double m_field = tone.amplitude * e0;
    const double w = 2.0 * kPi * tone.frequency_hz / es_prime.sample_rate;

    RealSignal out;
    out.sample_rate = es_prime.sample_rate;
    out.samples.resize(es_prime.samples.size());
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        const double c = std::cos(w * static_cast<double>(i) + tone.phase_rad);
        out.samples[i] = 2.0 * m_field * c * (e0 + es_prime.samples[i].real());
    }
    return out;
}

double estimate_dither_amplitude(const RealSignal& current, double f_d) {
    validate(current, "estimate_dither_amplitude input");
    if (!(f_d > 0.0)) throw std::invalid_argument("estimate_dither_amplitude: f_d must be > 0");
    const std::size_t n = current.samples.size();
    const double cycles = static_cast<double>(n) / current.sample_rate * 2.0 * f_d;
    if (cycles < 2.0)
        throw std::invalid_argument("estimate_dither_amplitude: record spans fewer than 2 cycles of 2*f_d");

    const double mu = mean(current);
    const double w2 = 2.0 * kPi * (2.0 * f_d) / current.sample_rate;
    double acc_re = 0.0, acc_im = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double win = 0.5 * (1.0 - std::cos(2.0 * kPi * (static_cast<double>(i) + 0.5) /
                                                 static_cast<double>(n)));
        const double x = (current.samples[i] - mu) * win;
        const double ph = w2 * static_cast<double>(i);
        acc_re += x * std::cos(ph);
        acc_im -= x * std::sin(ph);
        wsum += win;
    }
    const double amp = 2.0 * std::hypot(acc_re, acc_im) / wsum;
    return std::sqrt(2.0 * amp);
}

double compute_alpha(double m_true_estimate, double m_grid) {
    if (m_grid == 0.0) throw std::invalid_argument("compute_alpha: zero grid amplitude");
    return m_true_estimate / m_grid;
}

namespace {

struct Candidate {
    ObjectiveValue obj;
    std::size_t ai = 0, ti = 0;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    if (!(a.obj == b.obj)) return a.obj < b.obj;
    if (a.ai != b.ai) return a.ai < b.ai;
    return a.ti < b.ti;
}

}  // namespace

GridPick grid_search_tone(const RealSignal& base_current, const RxChain& ctx,
                          const ComplexSignal& es_prime, double f_d, const ToneGrid& grid,
                          MultCounter* counter) {
    grid.validate();
    const std::size_t na = grid.amplitude_values.size();
    const std::size_t nt = grid.angle_values.size();
    const std::size_t n = base_current.samples.size();
    const std::size_t total = na * nt;

    const unsigned threads = std::max(1u, std::min<unsigned>(ctx.threads, static_cast<unsigned>(total)));
    std::vector<Candidate> best(threads);
    std::vector<bool> best_set(threads, false);
    std::vector<MultCounter> tallies(threads);

    auto worker = [&](unsigned tid) {
        const double e0 = ctx.carrier.amplitude;
        const double w = 2.0 * kPi * f_d / base_current.sample_rate;
        RealSignal corrected;
        corrected.sample_rate = base_current.sample_rate;
        corrected.samples.resize(n);
        for (std::size_t c = tid; c < total; c += threads) {
            const std::size_t ai = c / nt;
            const std::size_t ti = c % nt;
            const double m = grid.amplitude_values[ai];
            const double th = grid.angle_values[ti];
            if (m == 0.0) {
                corrected.samples = base_current.samples;
            } else {
                const double m_field = m * e0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double cosv = std::cos(w * static_cast<double>(i) + th);
                    const double d = 2.0 * m_field * cosv * (e0 + es_prime.samples[i].real());
                    corrected.samples[i] = base_current.samples[i] - d;
                }
            }
            tallies[tid].construction += 4 * static_cast<std::uint64_t>(n);
            const ScoreResult s = score_corrected_current(corrected, ctx);
            tallies[tid].error_eval +=
                static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
            const Candidate cand{s.objective, ai, ti};
            if (!best_set[tid] || candidate_less(cand, best[tid])) {
                best[tid] = cand;
                best_set[tid] = true;
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    Candidate winner;
    bool have = false;
    for (unsigned t = 0; t < threads; ++t) {
        if (!best_set[t]) continue;
        if (!have || candidate_less(best[t], winner)) {
            winner = best[t];
            have = true;
        }
    }
    if (counter) {
        for (const auto& t : tallies) {
            counter->construction += t.construction;
            counter->error_eval += t.error_eval;
        }
    }

    GridPick pick;
    pick.amplitude = grid.amplitude_values[winner.ai];
    pick.angle = grid.angle_values[winner.ti];
    pick.objective = winner.obj;
    pick.amplitude_index = winner.ai;
    pick.angle_index = winner.ti;
    return pick;
}

DsbicReport dsbic_iterate(const RealSignal& current, const DsbicConfig& cfg, const RxChain& ctx_in,
                          MultCounter* counter) {
    cfg.validate();
    validate(current, "dsbic input");
    RxChain ctx = ctx_in;
    ctx.objective = cfg.objective;

    std::vector<double> freqs = cfg.tone_frequencies_hz;
    std::sort(freqs.begin(), freqs.end());

    const std::size_t n = current.samples.size();
    std::vector<RealSignal> corr(freqs.size());
    std::vector<bool> have(freqs.size(), false);
    std::vector<ToneIterationRecord> tone_state(freqs.size());
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        corr[k].sample_rate = current.sample_rate;
        corr[k].samples.assign(n, 0.0);
        tone_state[k].frequency_hz = freqs[k];
    }

    auto subtract_all_except = [&](std::size_t skip) {
        RealSignal base = current;
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            if (k == skip || !have[k]) continue;
            for (std::size_t i = 0; i < n; ++i) base.samples[i] -= corr[k].samples[i];
        }
        return base;
    };

    DsbicReport report;
    report.carrier = ctx.carrier;
    RealSignal work = current;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const ComplexSignal es = kk_reconstruct(work, ctx.kk, ctx.carrier);
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            RealSignal base = subtract_all_except(k);
            const GridPick pick = grid_search_tone(base, ctx, es, freqs[k], cfg.grid, counter);

            bool accept = true;
            if (have[k]) {
                RealSignal with_keep = base;
                for (std::size_t i = 0; i < n; ++i) with_keep.samples[i] -= corr[k].samples[i];
                const ScoreResult keep_score = score_corrected_current(with_keep, ctx);
                accept = pick.objective < keep_score.objective;
            }
            if (accept) {
                double alpha = 1.0;
                DitherTone tone{pick.amplitude, freqs[k], pick.angle};
                if (pick.amplitude > 0.0) {
                    if (cfg.alpha_mode == AlphaMode::cross_correlation) {
                        const double m_hat =
                            estimate_dither_amplitude(current, freqs[k]) / ctx.carrier.amplitude;
                        alpha = compute_alpha(m_hat, pick.amplitude);
                    }
                    RealSignal d = reconstruct_distortion(es, ctx.carrier, tone);
                    if (alpha != 1.0)
                        for (auto& v : d.samples) v *= alpha;
                    corr[k] = std::move(d);
                } else {
                    corr[k].samples.assign(n, 0.0);
                }
                have[k] = true;
                tone_state[k] = {freqs[k], pick.amplitude, pick.angle, alpha, false};
            } else {
                tone_state[k].kept_previous = true;
            }
        }

        work = current;
        for (std::size_t k = 0; k < freqs.size(); ++k)
            if (have[k])
                for (std::size_t i = 0; i < n; ++i) work.samples[i] -= corr[k].samples[i];

        const ScoreResult s = score_corrected_current(work, ctx);
        IterationRecord rec;
        rec.tones = tone_state;
        rec.objective_value = s.objective.primary;
        rec.ber = s.ber;
        rec.evm_db = s.evm_db;
        report.iterations.push_back(std::move(rec));
    }

    report.corrected_current = work;
    ComplexSignal field = kk_reconstruct(work, ctx.kk, ctx.carrier);
    report.recovered_field = std::move(field);
    return report;
}

std::uint64_t multiplication_count(const DsbicConfig& cfg, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("multiplication_count: n must be >= 1");
    const std::uint64_t per_candidate = 4 * n + n * n;
    const std::uint64_t grid_size =
        static_cast<std::uint64_t>(cfg.grid.amplitude_values.size()) *
        static_cast<std::uint64_t>(cfg.grid.angle_values.size());
    return static_cast<std::uint64_t>(cfg.iterations) *
           static_cast<std::uint64_t>(cfg.tone_frequencies_hz.size()) * grid_size * per_candidate;
}

std::string report_to_json(const DsbicReport& report) {
    nlohmann::json j;
    j["carrier_amplitude"] = report.carrier.amplitude;
    j["iterations"] = nlohmann::json::array();
    for (const auto& it : report.iterations) {
        nlohmann::json ji;
        ji["objective"] = it.objective_value;
        if (it.ber >= 0.0) ji["ber"] = it.ber;
        ji["evm_db"] = it.evm_db;
        ji["tones"] = nlohmann::json::array();
        for (const auto& t : it.tones) {
            ji["tones"].push_back({{"frequency_hz", t.frequency_hz},
                                   {"amplitude", t.amplitude},
                                   {"phase_rad", t.phase_rad},
                                   {"alpha", t.alpha},
                                   {"kept_previous", t.kept_previous}});
        }
        j["iterations"].push_back(std::move(ji));
    }
    return j.dump(2);
}

}  // namespace kksim
