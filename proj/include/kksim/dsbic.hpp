#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kksim/channel.hpp"
#include "kksim/kk.hpp"
#include "kksim/metrics.hpp"
#include "kksim/signal.hpp"
#include "kksim/txchain.hpp"

namespace kksim {

enum class AlphaMode { cross_correlation, grid_only };
enum class Objective { training_error, decision_error };

/// Candidate grid for the blind tone search. Amplitudes are carrier-relative.
struct ToneGrid {
    std::vector<double> amplitude_values;
    std::vector<double> angle_values;

    static ToneGrid make_default();  // 25 amplitudes step 0.02, 12 angles step 0.52
    void validate() const;
};

struct DsbicConfig {
    ToneGrid grid = ToneGrid::make_default();
    std::size_t iterations = 3;
    std::vector<double> tone_frequencies_hz = {2.0e7, 5.2e7};
    AlphaMode alpha_mode = AlphaMode::cross_correlation;
    Objective objective = Objective::training_error;

    void validate() const;
};

/// Everything the candidate scorer needs to run the receiver once:
/// KK reconstruction, optional CD compensation, demodulation, scoring.
struct RxChain {
    OfdmConfig ofdm;
    std::size_t frames = 1;
    KkConfig kk;
    std::optional<FiberConfig> fiber;
    CarrierEstimate carrier;
    const std::vector<std::uint8_t>* truth_bits = nullptr;   // null = blind
    const std::vector<cplx>* truth_symbols = nullptr;
    Objective objective = Objective::training_error;
    unsigned threads = 1;
};

/// Lexicographic objective: primary then secondary. training_error scores
/// (BER, truth-referenced symbol MSE); decision_error scores the
/// decision-directed MSE. Blind records fall back to decision scoring.
struct ObjectiveValue {
    double primary = 0.0;
    double secondary = 0.0;
    bool operator<(const ObjectiveValue& o) const {
        if (primary != o.primary) return primary < o.primary;
        return secondary < o.secondary;
    }
    bool operator==(const ObjectiveValue& o) const {
        return primary == o.primary && secondary == o.secondary;
    }
};

struct ScoreResult {
    ObjectiveValue objective;
    double ber = -1.0;  // -1 when truth bits unavailable
    double evm_db = 0.0;
};

/// Run the receiver on a (corrected) photocurrent and score it.
ScoreResult score_corrected_current(const RealSignal& current, const RxChain& ctx);

/// Eq.-style beat reconstruction from the recovered field:
/// d[i] = 2*m*E0*cos(2*pi*f*t_i + theta) * (E0 + Re{es'[i]}),
/// with m = tone.amplitude (carrier-relative) and E0 = carrier.amplitude.
RealSignal reconstruct_distortion(const ComplexSignal& es_prime, const CarrierEstimate& carrier,
                                  const DitherTone& tone);

/// Amplitude of the dither's second harmonic line in the photocurrent via a
/// Hann-windowed quadrature correlator at 2*f_d. The dither-dither term
/// contributes m^2/2 there, so the returned field-units estimate is
/// sqrt(2*|correlation|). Requires >= 2 cycles of 2*f_d in the record.
double estimate_dither_amplitude(const RealSignal& current, double f_d);

/// alpha = m_true_estimate / m_grid (Eq.-(4) scaling); errors on m_grid == 0.
double compute_alpha(double m_true_estimate, double m_grid);

/// Counts real multiplications attributed to the candidate scoring path:
/// 4n to build a candidate distortion and n^2 for the error evaluation,
/// per grid candidate.
struct MultCounter {
    std::uint64_t construction = 0;
    std::uint64_t error_eval = 0;
    std::uint64_t total() const { return construction + error_eval; }
};

struct GridPick {
    double amplitude = 0.0;  // carrier-relative
    double angle = 0.0;
    ObjectiveValue objective;
    std::size_t amplitude_index = 0;
    std::size_t angle_index = 0;
};

/// Exhaustive scan of the amplitude x angle grid. Every candidate rebuilds
/// the corrected current (base minus the candidate distortion from es_prime),
/// runs the full receiver, and is ranked by (objective, amplitude index,
/// angle index) so ties resolve toward the smallest amplitude then angle.
/// Deterministic for any thread count.
GridPick grid_search_tone(const RealSignal& base_current, const RxChain& ctx,
                          const ComplexSignal& es_prime, double f_d, const ToneGrid& grid,
                          MultCounter* counter = nullptr);

struct ToneIterationRecord {
    double frequency_hz = 0.0;
    double amplitude = 0.0;  // chosen grid amplitude (carrier-relative)
    double phase_rad = 0.0;
    double alpha = 1.0;
    bool kept_previous = false;  // incumbent correction retained this iteration
};

struct IterationRecord {
    std::vector<ToneIterationRecord> tones;
    double objective_value = 0.0;
    double ber = -1.0;
    double evm_db = 0.0;
};

struct DsbicReport {
    std::vector<IterationRecord> iterations;
    RealSignal corrected_current;
    ComplexSignal recovered_field;
    CarrierEstimate carrier;
};

/// The full iterative loop. Per iteration: KK-reconstruct the working
/// current, then per tone (ascending frequency) grid-search against the
/// original current minus the other tones' corrections. A tone's previous
/// correction is kept unless a fresh candidate strictly improves the
/// objective; accepted candidates are alpha-scaled in cross-correlation
/// mode. The working current is rebuilt from the original every iteration.
DsbicReport dsbic_iterate(const RealSignal& current, const DsbicConfig& cfg, const RxChain& ctx,
                          MultCounter* counter = nullptr);

/// Closed-form count matching the instrumented scoring path:
/// iterations * tones * N_m * N_theta * (4n + n^2).
std::uint64_t multiplication_count(const DsbicConfig& cfg, std::uint64_t n);

/// Per-iteration tone estimates, alpha, objective and BER as a JSON string.
std::string report_to_json(const DsbicReport& report);

}  // namespace kksim
