#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kerr/closed_form.hpp"
#include "kerr/core.hpp"
#include "kerr/fock_engine.hpp"

namespace kerr {

inline constexpr int kMaxExpansionOrder = 8;

/// coefficient * a^dag^creation a^annihilation
struct NormalOrderedTerm {
    std::int64_t coefficient;
    int creation;
    int annihilation;
};

/// q^order = i^imag_power * 2^{-order/2} * sum_terms coefficient a^dag^i a^j.
///
/// The integer coefficients are those of (a + a^dag)^order for x and
/// (a - a^dag)^order for p, brought to normal order with a a^dag = a^dag a + 1.
/// The common prefactor is kept symbolic so nothing is rounded before evaluation.
struct NormalOrderedExpansion {
    Quadrature quadrature;
    int order;
    int imag_power;  // 0..3
    std::vector<NormalOrderedTerm> terms;

    /// 2^{-order/2}
    double scale() const;
};

/// Exact normal-ordered form of x^order or p^order, 1 <= order <= 8.
/// Results come from a table built once on first use.
const NormalOrderedExpansion& expand_quadrature_power(Quadrature which, int order);

using IntegerMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// The integer part of the expansion, sum coefficient a^dag^i a^j, as a dim x dim
/// matrix in the factorial-scaled number basis |n> -> sqrt(n!)|n>. In that basis
/// a has unit superdiagonal and a^dag has n on its subdiagonal, so every entry is an integer.
IntegerMatrix scaled_matrix(const NormalOrderedExpansion& expansion, int dim);

/// Sum of general_moment values (and conjugates) over the expansion terms.
/// Throws NumericalError if the imaginary residue exceeds 1e-10 of the term scale.
double closed_moment_via_expansion(const ClosedFormContext& ctx, Quadrature which, int order,
                                   double t);

enum class MomentPath { closed_form, oracle };

std::string to_string(MomentPath path);

/// Raw moments <q^k>, k = 0..4 (index 0 holds 1).
struct RawMoments {
    std::array<double, 5> x{1.0, 0.0, 0.0, 0.0, 0.0};
    std::array<double, 5> p{1.0, 0.0, 0.0, 0.0, 0.0};
};

struct StatisticsRecord {
    double t = 0.0;
    MomentPath path = MomentPath::closed_form;
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.0;
    double var_p = 0.0;
    double uncertainty_product = 0.0;
    double skewness_sq_x = 0.0;
    double skewness_sq_p = 0.0;
    double excess_kurtosis_x = 0.0;
    double excess_kurtosis_p = 0.0;
    double autocorrelation = 0.0;
};

/// Central moments by binomial combination of raw moments. Throws NumericalError
/// if either variance is not positive.
StatisticsRecord assemble_statistics(const RawMoments& raw, double t, MomentPath path,
                                     double autocorrelation);

RawMoments closed_form_raw_moments(const ClosedFormContext& ctx, double t);
RawMoments oracle_raw_moments(const FockVector& state);

/// Closed-form path.
StatisticsRecord statistics_at(const ClosedFormContext& ctx, double t);

/// Oracle path: evolves state0 to t and applies the quadratures numerically.
StatisticsRecord statistics_at(const FockVector& state0, const KerrModel& model, double t);

}  // namespace kerr
