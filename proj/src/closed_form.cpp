#include "kerr/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "phase.hpp"

namespace kerr {

namespace {

// e^{-nu (1 - cos angle)} with 1 - cos written as 2 sin^2(angle/2).
double envelope(double nu, double angle) {
    const double s = std::sin(0.5 * angle);
    return std::exp(-2.0 * nu * s * s);
}

complex ipow(complex z, int n) {
    complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
        r *= z;
    }
    return r;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r *= x;
    }
    return r;
}

}  // namespace

complex alpha_t(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const double angle = detail::turn_angle(1, ctx.model.cycles(t));  // 2 chi t
    const double phase = nu * std::sin(angle);
    return ctx.params.alpha() * envelope(nu, angle) * complex{std::cos(phase), -std::sin(phase)};
}

double mean_x(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const double angle = detail::turn_angle(1, ctx.model.cycles(t));
    const double phase = nu * std::sin(angle);
    return envelope(nu, angle) *
           (ctx.params.x0() * std::cos(phase) + ctx.params.p0() * std::sin(phase));
}

double mean_p(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const double angle = detail::turn_angle(1, ctx.model.cycles(t));
    const double phase = nu * std::sin(angle);
    return envelope(nu, angle) *
           (-ctx.params.x0() * std::sin(phase) + ctx.params.p0() * std::cos(phase));
}

namespace {

// e^{-nu(1 - cos 4chi t)} [(x0^2 - p0^2) cos theta + 2 x0 p0 sin theta],
// theta = 2chi t + nu sin 4chi t.
double second_moment_oscillation(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const double x0 = ctx.params.x0();
    const double p0 = ctx.params.p0();
    const long double cycles = ctx.model.cycles(t);
    const double angle2 = detail::turn_angle(1, cycles);
    const double angle4 = detail::turn_angle(2, cycles);
    const double theta = angle2 + nu * std::sin(angle4);
    return envelope(nu, angle4) *
           ((x0 * x0 - p0 * p0) * std::cos(theta) + 2.0 * x0 * p0 * std::sin(theta));
}

}  // namespace

double second_moment_x(const ClosedFormContext& ctx, double t) {
    const double x0 = ctx.params.x0();
    const double p0 = ctx.params.p0();
    return 0.5 * (1.0 + x0 * x0 + p0 * p0 + second_moment_oscillation(ctx, t));
}

double second_moment_p(const ClosedFormContext& ctx, double t) {
    const double x0 = ctx.params.x0();
    const double p0 = ctx.params.p0();
    return 0.5 * (1.0 + x0 * x0 + p0 * p0 - second_moment_oscillation(ctx, t));
}

namespace {

struct ThirdMomentParts {
    double cos_part;  // e^{-nu(1 - cos 6chi t)} cos(6chi t + nu sin 6chi t)
    double sin_part;
    double cos2;      // cos 2chi t
    double sin2;
};

ThirdMomentParts third_moment_parts(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const long double cycles = ctx.model.cycles(t);
    const double angle2 = detail::turn_angle(1, cycles);
    const double angle6 = detail::turn_angle(3, cycles);
    const double theta = angle6 + nu * std::sin(angle6);
    const double env = envelope(nu, angle6);
    return {env * std::cos(theta), env * std::sin(theta), std::cos(angle2), std::sin(angle2)};
}

}  // namespace

// The <a^dag a^2> and <a> terms contribute 6[nu(<x> cos 2chi t + <p> sin 2chi t) + <x>];
// at nu = 1 this coincides with 6nu[<x>(1 + cos 2chi t) + <p> sin 2chi t].
double third_moment_x(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const double x0 = ctx.params.x0();
    const double p0 = ctx.params.p0();
    const ThirdMomentParts w = third_moment_parts(ctx, t);
    const double mx = mean_x(ctx, t);
    const double mp = mean_p(ctx, t);
    const double cubic = (x0 * x0 * x0 - 3.0 * x0 * p0 * p0) * w.cos_part +
                         (3.0 * x0 * x0 * p0 - p0 * p0 * p0) * w.sin_part;
    const double coupling = 6.0 * (nu * (mx * w.cos2 + mp * w.sin2) + mx);
    return 0.25 * (cubic + coupling);
}

double third_moment_p(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    const double x0 = ctx.params.x0();
    const double p0 = ctx.params.p0();
    const ThirdMomentParts w = third_moment_parts(ctx, t);
    const double mx = mean_x(ctx, t);
    const double mp = mean_p(ctx, t);
    const double cubic = (x0 * x0 * x0 - 3.0 * x0 * p0 * p0) * w.sin_part -
                         (3.0 * x0 * x0 * p0 - p0 * p0 * p0) * w.cos_part;
    const double coupling = 6.0 * (nu * (mp * w.cos2 - mx * w.sin2) + mp);
    return 0.25 * (cubic + coupling);
}

complex general_moment(const ClosedFormContext& ctx, int k, int l, double t) {
    if (k < 0 || l < 0 || k + l > kMaxClosedFormOrder) {
        throw std::invalid_argument("general moment indices (k = " + std::to_string(k) +
                                    ", l = " + std::to_string(l) + ") out of range");
    }
    const double nu = ctx.params.nu();
    const double nu_k = ipow(nu, k);
    if (l == 0) {
        return {nu_k, 0.0};
    }
    const long double cycles = ctx.model.cycles(t);
    const double angle = detail::turn_angle(l, cycles);  // 2 l chi t
    // chi (l(l-1) + 2kl) t = 2 pi [l(l-1)/2 + kl] (t / t_rev)
    const long double half_turns = static_cast<long double>(l) * (l - 1) / 2 +
                                   static_cast<long double>(k) * l;
    const double phase = detail::turn_angle(half_turns, cycles) + nu * std::sin(angle);
    return ipow(ctx.params.alpha(), l) * nu_k * envelope(nu, angle) *
           complex{std::cos(phase), -std::sin(phase)};
}

complex normal_moment(const ClosedFormContext& ctx, int creation, int annihilation, double t) {
    if (annihilation >= creation) {
        return general_moment(ctx, creation, annihilation - creation, t);
    }
    return std::conj(general_moment(ctx, annihilation, creation - annihilation, t));
}

double autocorrelation(const ClosedFormContext& ctx, double t) {
    const double nu = ctx.params.nu();
    if (nu == 0.0) {
        return 1.0;
    }
    const long double cycles = ctx.model.cycles(t);
    const double width = 14.0 * std::sqrt(nu) + 20.0;
    const int lo = static_cast<int>(std::max(0.0, std::floor(nu - width)));
    const int hi = static_cast<int>(std::ceil(nu + width));
    const double log_nu = std::log(nu);
    complex sum{};
    double total = 0.0;
    for (int n = lo; n <= hi; ++n) {
        const double weight = std::exp(-nu + n * log_nu - std::lgamma(n + 1.0));
        total += weight;
        const long double pairs = static_cast<long double>(n) * (n - 1) / 2;
        const double angle = detail::turn_angle(pairs, cycles);
        sum += weight * complex{std::cos(angle), -std::sin(angle)};
    }
    return std::norm(sum) / (total * total);
}

}  // namespace kerr
