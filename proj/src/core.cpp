#include "kerr/core.hpp"

#include <cmath>

namespace kerr {

std::string to_string(Quadrature q) { return q == Quadrature::x ? "x" : "p"; }

complex CoherentParams::alpha_from(double x0, double p0) {
    return complex{x0, p0} / std::numbers::sqrt2;
}

double CoherentParams::nu_from(double x0, double p0) { return 0.5 * (x0 * x0 + p0 * p0); }

CoherentParams::CoherentParams(double x0, double p0)
    : x0_(x0), p0_(p0), alpha_(alpha_from(x0, p0)), nu_(nu_from(x0, p0)) {
    if (!std::isfinite(x0) || !std::isfinite(p0)) {
        throw ConfigError("coherent parameters must be finite");
    }
}

KerrModel::KerrModel(double chi) : chi_(chi), t_rev_(std::numbers::pi / chi), t_cl_(t_rev_) {
    if (!std::isfinite(chi) || !(chi > 0.0)) {
        throw ConfigError("chi must be finite and positive");
    }
}

}  // namespace kerr
