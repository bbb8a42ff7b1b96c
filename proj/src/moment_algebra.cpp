#include "kerr/moment_algebra.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace kerr {

double NormalOrderedExpansion::scale() const { return std::pow(2.0, -0.5 * order); }

namespace {

NormalOrderedExpansion build_expansion(Quadrature which, int order) {
    const std::int64_t sign = which == Quadrature::x ? 1 : -1;
    // (i, j) -> coefficient of a^dag^i a^j
    std::map<std::pair<int, int>, std::int64_t> poly{{{0, 0}, 1}};
    for (int step = 0; step < order; ++step) {
        std::map<std::pair<int, int>, std::int64_t> next;
        for (const auto& [powers, c] : poly) {
            const auto [i, j] = powers;
            // right-multiply by a
            next[{i, j + 1}] += c;
            // right-multiply by a^dag: a^j a^dag = a^dag a^j + j a^{j-1}
            next[{i + 1, j}] += sign * c;
            if (j > 0) {
                next[{i, j - 1}] += sign * c * j;
            }
        }
        poly = std::move(next);
    }

    NormalOrderedExpansion e{which, order, which == Quadrature::x ? 0 : (3 * order) % 4, {}};
    for (const auto& [powers, c] : poly) {
        if (c != 0) {
            e.terms.push_back({c, powers.first, powers.second});
        }
    }
    return e;
}

struct ExpansionTable {
    std::vector<NormalOrderedExpansion> x;
    std::vector<NormalOrderedExpansion> p;

    ExpansionTable() {
        for (int order = 1; order <= kMaxExpansionOrder; ++order) {
            x.push_back(build_expansion(Quadrature::x, order));
            p.push_back(build_expansion(Quadrature::p, order));
        }
    }
};

complex i_power(int k) {
    switch (k % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

const NormalOrderedExpansion& expand_quadrature_power(Quadrature which, int order) {
    if (order < 1 || order > kMaxExpansionOrder) {
        throw std::invalid_argument("expansion order " + std::to_string(order) +
                                    " outside [1, " + std::to_string(kMaxExpansionOrder) + "]");
    }
    static const ExpansionTable table;
    return (which == Quadrature::x ? table.x : table.p)[order - 1];
}

IntegerMatrix scaled_matrix(const NormalOrderedExpansion& expansion, int dim) {
    IntegerMatrix m = IntegerMatrix::Zero(dim, dim);
    for (const auto& term : expansion.terms) {
        // a^j: |n> -> |n-j> with unit weight; a^dag^i: |r> -> (r+1)...(r+i) |r+i>
        for (int n = term.annihilation; n < dim; ++n) {
            const int low = n - term.annihilation;
            const int row = low + term.creation;
            if (row >= dim) {
                continue;
            }
            std::int64_t weight = 1;
            for (int r = low + 1; r <= row; ++r) {
                weight *= r;
            }
            m(row, n) += term.coefficient * weight;
        }
    }
    return m;
}

double closed_moment_via_expansion(const ClosedFormContext& ctx, Quadrature which, int order,
                                   double t) {
    const NormalOrderedExpansion& e = expand_quadrature_power(which, order);
    complex sum{};
    double magnitude = 0.0;
    for (const auto& term : e.terms) {
        const complex v = static_cast<double>(term.coefficient) *
                          normal_moment(ctx, term.creation, term.annihilation, t);
        sum += v;
        magnitude += std::abs(v);
    }
    const complex value = i_power(e.imag_power) * e.scale() * sum;
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, e.scale() * magnitude)) {
        throw NumericalError("closed-form <" + to_string(which) + "^" + std::to_string(order) +
                             "> has imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

std::string to_string(MomentPath path) {
    return path == MomentPath::closed_form ? "closed_form" : "oracle";
}

StatisticsRecord assemble_statistics(const RawMoments& raw, double t, MomentPath path,
                                     double autocorrelation) {
    struct Central {
        double var, skew_sq, exkurt;
    };
    auto central = [t](const std::array<double, 5>& m, const char* name) {
        const double m1 = m[1];
        const double var = m[2] - m1 * m1;
        if (!(var > 0.0)) {
            throw NumericalError(std::string("non-positive variance of ") + name +
                                 " at t = " + std::to_string(t));
        }
        const double c3 = m[3] - 3.0 * m1 * m[2] + 2.0 * m1 * m1 * m1;
        const double c4 = m[4] - 4.0 * m1 * m[3] + 6.0 * m1 * m1 * m[2] - 3.0 * m1 * m1 * m1 * m1;
        return Central{var, c3 * c3 / (var * var * var), c4 / (var * var) - 3.0};
    };
    const Central cx = central(raw.x, "x");
    const Central cp = central(raw.p, "p");

    StatisticsRecord r;
    r.t = t;
    r.path = path;
    r.mean_x = raw.x[1];
    r.mean_p = raw.p[1];
    r.var_x = cx.var;
    r.var_p = cp.var;
    r.uncertainty_product = std::sqrt(cx.var * cp.var);
    r.skewness_sq_x = cx.skew_sq;
    r.skewness_sq_p = cp.skew_sq;
    r.excess_kurtosis_x = cx.exkurt;
    r.excess_kurtosis_p = cp.exkurt;
    r.autocorrelation = autocorrelation;
    return r;
}

RawMoments closed_form_raw_moments(const ClosedFormContext& ctx, double t) {
    RawMoments raw;
    for (int k = 1; k <= 4; ++k) {
        raw.x[k] = closed_moment_via_expansion(ctx, Quadrature::x, k, t);
        raw.p[k] = closed_moment_via_expansion(ctx, Quadrature::p, k, t);
    }
    return raw;
}

RawMoments oracle_raw_moments(const FockVector& state) {
    RawMoments raw;
    for (int k = 1; k <= 4; ++k) {
        raw.x[k] = numeric_quadrature_moment(state, Quadrature::x, k).value;
        raw.p[k] = numeric_quadrature_moment(state, Quadrature::p, k).value;
    }
    return raw;
}

StatisticsRecord statistics_at(const ClosedFormContext& ctx, double t) {
    return assemble_statistics(closed_form_raw_moments(ctx, t), t, MomentPath::closed_form,
                               autocorrelation(ctx, t));
}

StatisticsRecord statistics_at(const FockVector& state0, const KerrModel& model, double t) {
    const FockVector state = evolve(state0, model, t);
    const double norm = state0.norm_squared();
    const double c = std::norm(state0.amplitudes().dot(state.amplitudes())) / (norm * norm);
    return assemble_statistics(oracle_raw_moments(state), t, MomentPath::oracle, c);
}

}  // namespace kerr
