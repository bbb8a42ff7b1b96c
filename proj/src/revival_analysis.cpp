#include "kerr/revival_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kerr/closed_form.hpp"
#include "phase.hpp"

namespace kerr {

RevivalSchedule predict_schedule(const KerrModel& model, int m_max) {
    if (m_max < 2) {
        throw std::invalid_argument("m_max must be at least 2");
    }
    RevivalSchedule schedule{model.t_rev(), {}};
    for (int m = 2; m <= m_max; ++m) {
        for (int l = 1; l < m; ++l) {
            if (std::gcd(l, m) == 1) {
                schedule.events.push_back({l, m, model.t_rev() * l / m});
            }
        }
    }
    std::sort(schedule.events.begin(), schedule.events.end(),
              [](const ScheduleEvent& a, const ScheduleEvent& b) {
                  // compare l/m exactly
                  return static_cast<long long>(a.l) * b.m < static_cast<long long>(b.l) * a.m;
              });
    return schedule;
}

std::vector<ScheduleEvent> burst_events(const KerrModel& model, int order, double t_begin,
                                        double t_end) {
    if (order < 1) {
        throw std::invalid_argument("moment order must be positive");
    }
    constexpr double slack = 1e-9;
    const double c_begin = t_begin / model.t_rev();
    const double c_end = t_end / model.t_rev();
    std::vector<ScheduleEvent> events;
    for (int m = 1; m <= order; ++m) {
        if (order % m != 0) {
            continue;
        }
        const int l_lo = static_cast<int>(std::ceil(c_begin * m - slack));
        const int l_hi = static_cast<int>(std::floor(c_end * m + slack));
        for (int l = l_lo; l <= l_hi; ++l) {
            if (std::gcd(l, m) == 1 || m == 1) {
                events.push_back({l, m, model.t_rev() * l / m});
            }
        }
    }
    std::sort(events.begin(), events.end(),
              [](const ScheduleEvent& a, const ScheduleEvent& b) { return a.t < b.t; });
    return events;
}

namespace {

double reconstruction_fidelity(const std::vector<complex>& coefficients,
                               const std::vector<complex>& components, const FockVector& state) {
    const std::size_t count = components.size();
    complex rec_norm{};
    complex overlap{};
    for (std::size_t a = 0; a < count; ++a) {
        const Eigen::VectorXcd ket_a = coherent_amplitudes(components[a], state.n_max());
        overlap += std::conj(coefficients[a]) * ket_a.dot(state.amplitudes());
        for (std::size_t b = 0; b < count; ++b) {
            // <beta_a|beta_b> = exp(conj(beta_a) beta_b - |beta_a|^2/2 - |beta_b|^2/2)
            const complex gram = std::exp(std::conj(components[a]) * components[b] -
                                          0.5 * std::norm(components[a]) -
                                          0.5 * std::norm(components[b]));
            rec_norm += std::conj(coefficients[a]) * coefficients[b] * gram;
        }
    }
    return std::norm(overlap) / (rec_norm.real() * state.norm_squared());
}

}  // namespace

CatDecomposition decompose_cat(const FockVector& state0, const KerrModel& model, int m, int l) {
    if (m < 1 || l < 1 || (m > 1 && l >= m) || (m == 1 && l != 1) || std::gcd(l, m) != 1) {
        throw std::invalid_argument("decompose_cat needs coprime 1 <= l < m (or l = m = 1), got l = " +
                                    std::to_string(l) + ", m = " + std::to_string(m));
    }
    if (std::abs(state0[0]) == 0.0) {
        throw std::invalid_argument("decompose_cat expects a coherent-prepared state");
    }
    const complex alpha = state0.n_max() > 0 ? state0[1] / state0[0] : complex{};
    const double t = model.t_rev() * l / m;
    const FockVector state = evolve(state0, model, t);

    // phi_n = exp(-i pi l n(n-1)/m) = exp(-2 pi i r_n/m), r_n = l n(n-1)/2 mod m
    auto phase_at = [l, m](long long n) {
        const long long r = (static_cast<long long>(l) * (n * (n - 1) / 2)) % m;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / m;
        return complex{std::cos(angle), -std::sin(angle)};
    };
    auto is_period = [&](int period) {
        for (int n = 0; n < 2 * period; ++n) {
            if (std::abs(phase_at(n + period) - phase_at(n)) > 1e-12) {
                return false;
            }
        }
        return true;
    };
    const int period = is_period(m) ? m : 2 * m;
    if (!is_period(period)) {
        throw NumericalError("phase sequence is not periodic with period m or 2m");
    }

    CatDecomposition out{m, l, t, m % 2 == 1 ? Parity::odd : Parity::even, period, {}, {}, 0.0};
    std::vector<complex> components;
    for (int q = 0; q < period; ++q) {
        complex f{};
        for (int n = 0; n < period; ++n) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(q * n) / period;
            f += phase_at(n) * complex{std::cos(angle), std::sin(angle)};
        }
        f /= static_cast<double>(period);
        // With period 2m only m of the 2m Fourier components survive.
        if (std::abs(f) < 1e-9) {
            continue;
        }
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(q) / period;
        const complex rotation{std::cos(angle), -std::sin(angle)};
        out.coefficients.push_back(f);
        out.basis_phases.push_back(rotation);
        components.push_back(alpha * rotation);
    }

    out.fidelity = reconstruction_fidelity(out.coefficients, components, state);
    if (!(out.fidelity >= 1.0 - 1e-6)) {
        throw FidelityError("cat decomposition at l = " + std::to_string(l) +
                            ", m = " + std::to_string(m) + " reached fidelity " +
                            std::to_string(out.fidelity));
    }
    return out;
}

double modulation_envelope(const CoherentParams& params, const KerrModel& model, int m, double t) {
    if (m < 1) {
        throw std::invalid_argument("modulation order must be positive");
    }
    const double angle = detail::turn_angle(m, model.cycles(t));
    const double s = std::sin(0.5 * angle);
    return std::exp(-2.0 * params.nu() * s * s);
}

BurstOptions default_burst_options(const KerrModel& model) {
    return {model.t_rev() / 64.0, 5.0};
}

BurstReport detect_bursts(std::span<const double> times, std::span<const double> values,
                          int moment_order, const KerrModel& model, const BurstOptions& options) {
    const std::size_t count = times.size();
    if (count != values.size() || count < 2) {
        throw std::invalid_argument("burst detection needs matching time and value columns");
    }
    if (!(options.window > 0.0) || !(options.threshold_factor > 0.0)) {
        throw std::invalid_argument("burst window and threshold factor must be positive");
    }
    const double dt = (times.back() - times.front()) / static_cast<double>(count - 1);
    for (std::size_t i = 1; i < count; ++i) {
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-6 * dt) {
            throw std::invalid_argument("burst detection needs a uniformly sampled series");
        }
    }
    const auto per_window = static_cast<long>(std::floor(options.window / dt + 1e-9)) + 1;
    if (per_window < 16) {
        throw std::invalid_argument("undersampled series: " + std::to_string(per_window) +
                                    " samples per burst window, need at least 16");
    }
    const auto half = static_cast<std::size_t>(std::floor(0.5 * options.window / dt + 1e-9));

    std::vector<double> activity(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t lo = i > half ? i - half : 0;
        const std::size_t hi = std::min(count - 1, i + half);
        double variation = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            variation += std::abs(values[k + 1] - values[k]);
        }
        activity[i] = variation / (static_cast<double>(hi - lo) * dt);
    }

    std::vector<double> sorted = activity;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(count / 2), sorted.end());
    const double median = sorted[count / 2];
    const double peak = *std::max_element(activity.begin(), activity.end());
    const double floor = std::sqrt(std::numeric_limits<double>::epsilon()) * peak;

    BurstReport report;
    report.moment_order = moment_order;
    report.window = options.window;
    report.activity_threshold = options.threshold_factor * std::max(median, floor);

    for (std::size_t i = 0; i < count;) {
        if (!(activity[i] > report.activity_threshold)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < count && activity[j + 1] > report.activity_threshold) {
            ++j;
        }
        if (i == 0) {
            report.detected_times.push_back(times.front());
        } else if (j == count - 1) {
            report.detected_times.push_back(times.back());
        } else {
            const double cluster_peak =
                *std::max_element(activity.begin() + static_cast<long>(i),
                                  activity.begin() + static_cast<long>(j) + 1);
            std::size_t first = i;
            while (activity[first] < 0.5 * cluster_peak) {
                ++first;
            }
            std::size_t last = j;
            while (activity[last] < 0.5 * cluster_peak) {
                --last;
            }
            report.detected_times.push_back(0.5 * (times[first] + times[last]));
        }
        i = j + 1;
    }

    const std::vector<ScheduleEvent> expected =
        burst_events(model, moment_order, times.front(), times.back());
    std::vector<bool> hit(expected.size(), false);
    for (const double detected : report.detected_times) {
        std::size_t best = expected.size();
        double best_error = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < expected.size(); ++e) {
            const double error = std::abs(detected - expected[e].t);
            if (error < best_error) {
                best_error = error;
                best = e;
            }
        }
        if (best < expected.size() && best_error <= 0.5 * options.window) {
            report.matched.push_back({expected[best], detected, best_error});
            hit[best] = true;
        } else {
            report.unmatched_times.push_back(detected);
        }
    }
    for (std::size_t e = 0; e < expected.size(); ++e) {
        if (!hit[e]) {
            report.missed_events.push_back(expected[e]);
        }
    }
    return report;
}

std::vector<TimeInterval> quiet_intervals(const KerrModel& model, int order, double t_begin,
                                          double t_end, double quiet_fraction) {
    if (!(quiet_fraction > 0.0 && quiet_fraction <= 1.0)) {
        throw std::invalid_argument("quiet fraction must lie in (0, 1]");
    }
    const std::vector<ScheduleEvent> events = burst_events(model, order, t_begin, t_end);
    std::vector<TimeInterval> out;
    for (std::size_t i = 1; i < events.size(); ++i) {
        const ScheduleEvent& a = events[i - 1];
        const ScheduleEvent& b = events[i];
        const double wa = 1.0 / a.m;
        const double wb = 1.0 / b.m;
        const double margin = (1.0 - quiet_fraction) * (b.t - a.t);
        out.push_back({a.t + margin * wa / (wa + wb), b.t - margin * wb / (wa + wb)});
    }
    return out;
}

ClassicalPoint classical_check(const CoherentParams& params, const KerrModel& model, double t) {
    const ClosedFormContext ctx{params, model};
    const double nu = params.nu();
    const double angle = detail::turn_angle(1, model.cycles(t));
    const double s = std::sin(0.5 * angle);
    const double stretch = std::exp(2.0 * nu * s * s);  // e^{nu(1 - cos 2chi t)}
    const double tau = std::sin(angle);

    ClassicalPoint point{tau, mean_x(ctx, t) * stretch, mean_p(ctx, t) * stretch, 0.0};
    const double rotation = nu * tau;
    const double x_rot = params.x0() * std::cos(rotation) + params.p0() * std::sin(rotation);
    const double p_rot = -params.x0() * std::sin(rotation) + params.p0() * std::cos(rotation);
    point.residual = std::max(std::abs(point.X - x_rot), std::abs(point.P - p_rot));
    return point;
}

}  // namespace kerr
