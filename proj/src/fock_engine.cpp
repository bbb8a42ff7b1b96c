#include "kerr/fock_engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "phase.hpp"

namespace kerr {

FockVector::FockVector(Eigen::VectorXcd amplitudes, double tail_bound)
    : amplitudes_(std::move(amplitudes)), tail_bound_(tail_bound) {
    if (amplitudes_.size() == 0) {
        throw std::invalid_argument("FockVector needs at least one amplitude");
    }
}

Eigen::VectorXcd coherent_amplitudes(complex alpha, int n_max) {
    Eigen::VectorXcd c(n_max + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < n_max; ++n) {
        c[n + 1] = c[n] * alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return c;
}

double poisson_tail(double nu, int n_max) {
    if (nu == 0.0) {
        return 0.0;
    }
    int n = n_max + 1;
    double term = std::exp(-nu + n * std::log(nu) - std::lgamma(n + 1.0));
    double sum = 0.0;
    // Forward sum; past the mode the ratio nu/(n+1) < 1 bounds the remainder geometrically.
    for (;;) {
        sum += term;
        const double ratio = nu / (n + 1.0);
        term *= ratio;
        ++n;
        if (ratio < 1.0) {
            const double remainder = term / (1.0 - ratio);
            if (remainder <= sum * 1e-17 || remainder < std::numeric_limits<double>::min()) {
                return sum + remainder;
            }
        }
    }
}

FockVector prepare_coherent(const CoherentParams& params, double tail_tolerance) {
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw std::invalid_argument("tail tolerance must lie in (0, 1)");
    }
    const double nu = params.nu();
    if (std::exp(-0.5 * nu) < std::numeric_limits<double>::min()) {
        throw CutoffError("nu = " + std::to_string(nu) +
                          " underflows the vacuum amplitude; reduce |alpha|");
    }
    int n_max = static_cast<int>(std::ceil(nu + 10.0 * std::sqrt(nu) + 10.0));
    double tail = poisson_tail(nu, n_max);
    while (tail >= tail_tolerance && n_max <= kCutoffCeiling) {
        ++n_max;
        tail = poisson_tail(nu, n_max);
    }
    if (n_max > kCutoffCeiling) {
        throw CutoffError("tail tolerance " + std::to_string(tail_tolerance) +
                          " needs a cutoff above " + std::to_string(kCutoffCeiling) +
                          " for nu = " + std::to_string(nu));
    }
    return FockVector(coherent_amplitudes(params.alpha(), n_max), tail);
}

FockVector evolve(const FockVector& state0, const KerrModel& model, double t) {
    if (!std::isfinite(t)) {
        throw std::invalid_argument("evolution time must be finite");
    }
    const long double cycles = model.cycles(t);
    Eigen::VectorXcd c = state0.amplitudes();
    for (Eigen::Index n = 2; n < c.size(); ++n) {
        // chi n(n-1) t = 2 pi [n(n-1)/2] (t / t_rev)
        const long double pairs = static_cast<long double>(n) * (n - 1) / 2;
        const double angle = detail::turn_angle(pairs, cycles);
        c[n] *= complex{std::cos(angle), -std::sin(angle)};
    }
    return FockVector(std::move(c), state0.tail_bound());
}

double autocorrelation(const FockVector& state0, const KerrModel& model, double t) {
    const FockVector state = evolve(state0, model, t);
    const complex overlap = state0.amplitudes().dot(state.amplitudes());
    const double norm = state0.norm_squared();
    return std::norm(overlap) / (norm * norm);
}

namespace {

// (a^j psi)_m = c_{m+j} sqrt((m+j)!/m!)
Eigen::VectorXcd lower(const Eigen::VectorXcd& c, int j) {
    const Eigen::Index size = std::max<Eigen::Index>(c.size() - j, 0);
    Eigen::VectorXcd out(size);
    for (Eigen::Index m = 0; m < size; ++m) {
        double factor = 1.0;
        for (int r = 1; r <= j; ++r) {
            factor *= std::sqrt(static_cast<double>(m + r));
        }
        out[m] = c[m + j] * factor;
    }
    return out;
}

// q psi on a vector already padded so nothing spills past the end.
Eigen::VectorXcd apply_quadrature(const Eigen::VectorXcd& psi, Quadrature which) {
    const Eigen::Index size = psi.size();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    for (Eigen::Index n = 0; n < size; ++n) {
        const complex down = n + 1 < size ? std::sqrt(static_cast<double>(n + 1)) * psi[n + 1]
                                          : complex{};  // a contribution
        const complex up = n > 0 ? std::sqrt(static_cast<double>(n)) * psi[n - 1]
                                 : complex{};  // a^dag contribution
        if (which == Quadrature::x) {
            out[n] = (down + up) * inv_sqrt2;
        } else {
            out[n] = complex{0.0, -1.0} * (down - up) * inv_sqrt2;
        }
    }
    return out;
}

}  // namespace

complex numeric_normal_moment(const FockVector& state, int k, int j) {
    if (k < 0 || j < 0 || k + j > kMaxOracleOrder) {
        throw std::invalid_argument("normal moment order k + j = " + std::to_string(k + j) +
                                    " outside [0, " + std::to_string(kMaxOracleOrder) + "]");
    }
    const Eigen::VectorXcd raised_bra = lower(state.amplitudes(), k);
    const Eigen::VectorXcd lowered = lower(state.amplitudes(), j);
    const Eigen::Index overlap = std::min(raised_bra.size(), lowered.size());
    return raised_bra.head(overlap).dot(lowered.head(overlap));
}

QuadratureMoment numeric_quadrature_moment(const FockVector& state, Quadrature which, int order) {
    if (order < 1 || order > kMaxOracleOrder) {
        throw std::invalid_argument("quadrature moment order " + std::to_string(order) +
                                    " outside [1, " + std::to_string(kMaxOracleOrder) + "]");
    }
    const int n_max = state.n_max();
    if (n_max < order) {
        throw CutoffError("insufficient cutoff headroom: n_max = " + std::to_string(n_max) +
                          " for order " + std::to_string(order));
    }

    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(n_max + 1 + order);
    ket.head(n_max + 1) = state.amplitudes();
    Eigen::VectorXcd bra = ket;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        ket = apply_quadrature(ket, which);
    }
    for (int i = 0; i < order / 2; ++i) {
        bra = apply_quadrature(bra, which);
    }
    const complex value = bra.dot(ket);
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
        throw NumericalError("quadrature moment <" + to_string(which) + "^" +
                             std::to_string(order) + "> has imaginary part " +
                             std::to_string(value.imag()));
    }

    const double top_mass = state.amplitudes().tail(order).squaredNorm();
    const double affected = std::sqrt(top_mass + state.tail_bound());
    const double op_norm = std::pow(2.0 * (n_max + order + 1), 0.5 * order);
    return {value.real(), op_norm * (2.0 * affected + affected * affected)};
}

}  // namespace kerr
