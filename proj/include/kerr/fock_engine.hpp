#pragma once

#include <Eigen/Dense>

#include "kerr/core.hpp"

namespace kerr {

/// Largest cutoff prepare_coherent will consider.
inline constexpr int kCutoffCeiling = 4096;

/// Maximum k + j (normal moments) and order (quadrature moments) the oracle accepts.
inline constexpr int kMaxOracleOrder = 8;

/// Complex amplitudes c_0..c_{n_max} over number states, plus an upper bound on
/// the probability mass discarded by the cutoff.
class FockVector {
public:
    FockVector(Eigen::VectorXcd amplitudes, double tail_bound);

    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    complex operator[](Eigen::Index n) const { return amplitudes_[n]; }
    int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
    double tail_bound() const { return tail_bound_; }
    double norm_squared() const { return amplitudes_.squaredNorm(); }

private:
    Eigen::VectorXcd amplitudes_;
    double tail_bound_;
};

/// Coherent-state amplitudes c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!) for n <= n_max,
/// built by the recurrence c_{n+1} = c_n alpha / sqrt(n+1).
Eigen::VectorXcd coherent_amplitudes(complex alpha, int n_max);

/// Poisson mass beyond n_max for mean nu. Summed directly, never as 1 - partial sum.
double poisson_tail(double nu, int n_max);

/// Truncates |alpha> at the smallest n_max (searched upward from
/// ceil(nu + 10 sqrt(nu) + 10)) whose discarded mass is below tail_tolerance.
/// Throws CutoffError if that needs more than kCutoffCeiling levels.
FockVector prepare_coherent(const CoherentParams& params, double tail_tolerance);

/// c_n(t) = c_n(0) exp(-i chi n(n-1) t).
FockVector evolve(const FockVector& state0, const KerrModel& model, double t);

/// C(t) = |<psi(0)|psi(t)>|^2, normalised by <psi(0)|psi(0)>^2 so that the
/// truncated tail does not bias revivals below one.
double autocorrelation(const FockVector& state0, const KerrModel& model, double t);

/// <a^dag^k a^j> = <a^k psi | a^j psi>, evaluated on the truncated vector.
complex numeric_normal_moment(const FockVector& state, int k, int j);

struct QuadratureMoment {
    double value;
    /// Bound on the contribution of the top `order` amplitudes plus the discarded tail.
    double truncation_bound;
};

/// <q^order> with q = (a + a^dag)/sqrt(2) or (a - a^dag)/(i sqrt(2)), applied as a
/// tridiagonal operator on a zero-padded copy of the state.
QuadratureMoment numeric_quadrature_moment(const FockVector& state, Quadrature which, int order);

}  // namespace kerr
