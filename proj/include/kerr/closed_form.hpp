#pragma once

#include "kerr/core.hpp"

namespace kerr {

/// Analytic expectation values for an initially coherent state under
/// H = hbar chi N(N-1). No state vector is involved anywhere in this header.
struct ClosedFormContext {
    CoherentParams params;
    KerrModel model;
};

/// alpha(t) = <a>(t) = alpha e^{-nu(1 - cos 2chi t)} e^{-i nu sin 2chi t}.
complex alpha_t(const ClosedFormContext& ctx, double t);

double mean_x(const ClosedFormContext& ctx, double t);
double mean_p(const ClosedFormContext& ctx, double t);

double second_moment_x(const ClosedFormContext& ctx, double t);
double second_moment_p(const ClosedFormContext& ctx, double t);

double third_moment_x(const ClosedFormContext& ctx, double t);
double third_moment_p(const ClosedFormContext& ctx, double t);

/// <a^dag^k a^{k+l}>(t) =
///   alpha^l nu^k e^{-nu(1 - cos 2l chi t)} exp[-i chi (l(l-1) + 2kl) t - i nu sin 2l chi t].
complex general_moment(const ClosedFormContext& ctx, int k, int l, double t);

/// <a^dag^i a^j>(t) for any i, j. Creation-excess moments are the conjugate of
/// general_moment with the roles swapped.
complex normal_moment(const ClosedFormContext& ctx, int creation, int annihilation, double t);

/// |<alpha|psi(t)>|^2 as a Poisson-weighted phase sum, sum_n P_n e^{-i chi n(n-1) t}.
double autocorrelation(const ClosedFormContext& ctx, double t);

/// Highest k + l accepted by general_moment / normal_moment.
inline constexpr int kMaxClosedFormOrder = 16;

}  // namespace kerr
