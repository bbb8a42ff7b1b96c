#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kerr {

using complex = std::complex<double>;

/// Invalid user-supplied configuration or arguments.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation left its valid numerical regime (cutoff ceiling, fidelity loss,
/// vanishing variance, non-real expectation value).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CutoffError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class FidelityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

enum class Quadrature { x, p };

std::string to_string(Quadrature q);

/// Initial coherent state |alpha> centred at (x0, p0) in phase space,
/// alpha = (x0 + i p0)/sqrt(2) and nu = |alpha|^2 = (x0^2 + p0^2)/2.
class CoherentParams {
public:
    CoherentParams(double x0, double p0);

    double x0() const { return x0_; }
    double p0() const { return p0_; }
    complex alpha() const { return alpha_; }
    double nu() const { return nu_; }

    static complex alpha_from(double x0, double p0);
    static double nu_from(double x0, double p0);

private:
    double x0_;
    double p0_;
    complex alpha_;
    double nu_;
};

/// H = hbar chi N(N-1). n(n-1) is even, so revival and classical periods
/// coincide at pi/chi.
class KerrModel {
public:
    explicit KerrModel(double chi);

    double chi() const { return chi_; }
    double t_rev() const { return t_rev_; }
    double t_cl() const { return t_cl_; }

    /// t in units of t_rev. Exact for t that are small-integer multiples of t_rev.
    long double cycles(double t) const { return static_cast<long double>(t) / t_rev_; }

private:
    double chi_;
    double t_rev_;
    double t_cl_;
};

}  // namespace kerr
