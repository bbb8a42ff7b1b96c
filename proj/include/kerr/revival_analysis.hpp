#pragma once

#include <span>
#include <vector>

#include "kerr/core.hpp"
#include "kerr/fock_engine.hpp"

namespace kerr {

/// t = pi l / (m chi) = (l/m) t_rev with gcd(l, m) = 1. Full revivals are m = 1, l = n.
struct ScheduleEvent {
    int l;
    int m;
    double t;
};

struct RevivalSchedule {
    double t_rev;
    std::vector<ScheduleEvent> events;  // sorted by t, all inside (0, t_rev)
};

/// Every coprime (l, m) with 2 <= m <= m_max, 1 <= l <= m - 1.
RevivalSchedule predict_schedule(const KerrModel& model, int m_max);

/// Events (n + l/m) t_rev in [t_begin, t_end] whose denominator m divides `order`,
/// full revivals included. These are the instants at which the order-`order`
/// moments are unfrozen by their modulation envelopes.
std::vector<ScheduleEvent> burst_events(const KerrModel& model, int order, double t_begin,
                                        double t_end);

enum class Parity { odd, even };

/// psi(pi l/(m chi)) = sum_q coefficients[q] |alpha * basis_phases[q]>.
struct CatDecomposition {
    int m;
    int l;
    double t;
    Parity parity;
    int period;  // period of the phase sequence in n: m, or 2m when l(m-1) is odd
    std::vector<complex> coefficients;
    std::vector<complex> basis_phases;
    double fidelity;
};

/// Fourier-decomposes the evolved coherent state at t = pi l/(m chi) into m rotated
/// coherent states and measures the reconstruction fidelity through the
/// coherent-state Gram matrix. Throws FidelityError below 1 - 1e-6.
CatDecomposition decompose_cat(const FockVector& state0, const KerrModel& model, int m, int l);

/// e^{-nu (1 - cos 2 m chi t)}
double modulation_envelope(const CoherentParams& params, const KerrModel& model, int m, double t);

struct BurstOptions {
    double window;
    double threshold_factor = 5.0;
};

/// window = t_rev / 64, threshold_factor = 5.
BurstOptions default_burst_options(const KerrModel& model);

struct MatchedBurst {
    ScheduleEvent event;
    double detected;
    double match_error;
};

struct BurstReport {
    int moment_order;
    std::vector<double> detected_times;
    std::vector<MatchedBurst> matched;
    std::vector<double> unmatched_times;
    std::vector<ScheduleEvent> missed_events;
    double activity_threshold;
    double window;
};

/// Flags intervals where a uniformly sampled series stops being static.
///
/// Activity at each sample is the total variation over a centred window (clipped at
/// the ends), per unit time. Samples whose activity exceeds
/// threshold_factor * max(median, sqrt(eps) * peak) form clusters; each cluster yields
/// one detection at the midpoint of its half-maximum extent, or at the scan edge when
/// the cluster is cut off by it. Detections are matched to burst_events(order) within
/// window / 2. Throws std::invalid_argument for non-uniform grids or fewer than
/// 16 samples per window.
BurstReport detect_bursts(std::span<const double> times, std::span<const double> values,
                          int moment_order, const KerrModel& model, const BurstOptions& options);

struct TimeInterval {
    double begin;
    double end;
};

/// The static stretches of an order-`order` moment series: between consecutive
/// burst events, the middle `quiet_fraction` of each interval, with the excluded
/// margin split between the two ends in proportion to 1/m of the bounding events
/// (a full revival unfreezes every order and bursts widest).
std::vector<TimeInterval> quiet_intervals(const KerrModel& model, int order, double t_begin,
                                          double t_end, double quiet_fraction = 0.8);

struct ClassicalPoint {
    double tau;  // sin 2 chi t
    double X;
    double P;
    double residual;
};

/// Rescales <x>, <p> by e^{nu(1 - cos 2chi t)} and compares with a rigid rotation
/// by angle nu tau of (x0, p0).
ClassicalPoint classical_check(const CoherentParams& params, const KerrModel& model, double t);

}  // namespace kerr
