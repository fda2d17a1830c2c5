#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ucplab/dirac.hpp"
#include "ucplab/perturbation.hpp"

namespace ucplab {

/// Annular region {S_t : 0 <= t <= T} in normal coordinates plus the cutoff plateau.
struct CarlemanGeometry {
    double T = 0.1;
    Domain domain = IntervalDomain{0.0, 0.1, 401};
    double plateau_end = 0.8;  ///< cutoff == 1 for t <= plateau_end * T
    double cutoff_end = 0.9;   ///< cutoff == 0 for t >= cutoff_end * T

    static CarlemanGeometry interval(double T, std::size_t n);
    static CarlemanGeometry annulus(double r_inner, double T, std::size_t nr, std::size_t ntheta);

    /// Throws PreconditionError unless 0 < T, 0 < plateau_end < cutoff_end < 1 and the
    /// domain's normal extent equals T.
    void validate() const;
};

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0, 1]; C^2 at both junctions.
double smoothstep(double x);
double smoothstep_derivative(double x);

/// 1 on [0, 0.8T], 0 on [0.9T, T], monotone quintic transition in between.
double bump_cutoff(const CarlemanGeometry& geom, double t);
double bump_cutoff_derivative(const CarlemanGeometry& geom, double t);

/// Integral stored as log(value); zero integrals have is_zero set.
struct LogIntegral {
    double log_value = 0.0;
    bool is_zero = true;

    double value() const;
};

/// log of the trapezoid value of int_0^T int_S e^{R (T-t)^2} |v|^2 dy dt,
/// accumulated with shifted exponentials so large R does not overflow.
LogIntegral weighted_l2_log(const SpinorField& v, double R, const CarlemanGeometry& geom);
double weighted_l2(const SpinorField& v, double R, const CarlemanGeometry& geom);

struct CarlemanReport {
    double R = 0.0;
    double lhs = 0.0;  ///< weighted L^2 of v (may be +inf for huge R; see log_lhs)
    double rhs = 0.0;  ///< weighted L^2 of Dv (or of the perturbed operator)
    double log_lhs = 0.0;
    double log_rhs = 0.0;
    std::optional<double> ratio;  ///< R lhs / rhs, defined only when rhs > 0 and lhs > 0
    double constant_estimate = 0.0;
    bool violation = false;  ///< rhs == 0 while lhs > 0
    std::optional<double> C0;  ///< admissibility constant used (perturbed case)
    std::size_t samples = 1;
    std::size_t argmax_sample = 0;
};

/// Throws PreconditionError unless |v| < tol on every slice with t >= 0.95 T.
void require_cutoff_support(const SpinorField& v, const CarlemanGeometry& geom, double tol = 1e-12);

CarlemanReport carleman_ratio(const DiracOperator& op, const SpinorField& v, double R, const CarlemanGeometry& geom);

/// As carleman_ratio with Dv replaced by Dv + P(v). Throws NonAdmissibleError if the
/// sampled admissibility bound fails for v.
CarlemanReport perturbed_carleman_ratio(const DiracOperator& op, const Perturbation& P, const SpinorField& v, double R,
                                        const CarlemanGeometry& geom);

using FieldSampler = std::function<SpinorField(std::size_t sample_index)>;

/// Random smooth fields vanishing at t = 0, multiplied by the cutoff. Sample i depends
/// only on (seed, i).
FieldSampler random_cutoff_sampler(const CarlemanGeometry& geom, std::uint64_t seed, int max_modes = 5);

struct SweepOptions {
    std::size_t samples = 20;
    double boundedness_factor = 2.0;
    unsigned jobs = 1;
};

struct SweepSummary {
    std::vector<CarlemanReport> rows;  ///< one per R, constant_estimate = max over samples
    bool applicable = false;           ///< R grid has >= 3 points spanning >= 2 decades
    bool degenerate = false;           ///< every sample has zero weighted norm
    double max_over_min = 0.0;         ///< max_R constant_estimate / min_R constant_estimate
    double sup_constant = 0.0;
    bool bounded = false;              ///< applicable && !degenerate && max_over_min <= factor
    double boundedness_factor = 2.0;
    std::optional<double> C0_max;      ///< largest admissibility constant seen (perturbed sweep)
};

/// Estimate the Carleman constant at every R of the grid as the max ratio over samples.
/// If P is given the perturbed ratio is used. Rows are ordered by R regardless of jobs.
SweepSummary constant_sweep(const DiracOperator& op, const FieldSampler& sampler, const std::vector<double>& R_grid,
                            const CarlemanGeometry& geom, const SweepOptions& opts = {},
                            const Perturbation* P = nullptr);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct DecayRow {
    double R = 0.0;
    bool conclusive = false;  ///< R > 2 C C0
    double log_factor = 0.0;  ///< log[(R/(R-2CC0)) (2C/R) e^{-21 R T^2/100}]
    double bound = 0.0;       ///< factor * int |cl(dt) cutoff' u|^2
    bool satisfied = false;   ///< measured <= bound (only meaningful when conclusive)
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double C = 0.0;
    double C0 = 0.0;
    double residual = 0.0;          ///< sup |Du + P(u)|
    double measured = 0.0;          ///< int_0^{T/2} |u|^2
    double cutoff_integral = 0.0;   ///< int |cl(dt) cutoff'(t) u|^2
    double expected_slope = 0.0;    ///< -21 T^2 / 100
    double grid_slope = 0.0;        ///< least-squares slope of log_factor over conclusive grid rows
    double asymptotic_slope = 0.0;  ///< secant slope of log_factor on [R_a, 10 R_a], R_a past the prefactor regime
    double asymptotic_R = 0.0;
    bool inconclusive = true;       ///< no grid point with R > 2 C C0
    bool all_satisfied = false;
};

/// Evaluate the weak-UCP decay bound for a solution u of Du + P(u) = 0.
/// C is the Carleman constant (typically the constant_sweep estimate).
DecayReport ucp_decay_check(const DiracOperator& op, const Perturbation& P, const SpinorField& u,
                            const std::vector<double>& R_grid, const CarlemanGeometry& geom, double C,
                            double residual_tol = 1e-8);

/// Terms of the expanded perturbed Carleman estimate after v = e^{-R(T-t)^2/2} v0.
struct JTerms {
    double J0 = 0.0;
    double J1 = 0.0;
    double J_skew = 0.0;
    double J_sym = 0.0;
    double J_mix = 0.0;
    double J3 = 0.0;
    double J_skew_pert = 0.0;
    double J_sym_pert = 0.0;
    double J_err = 0.0;
    double epsilon = 0.25;

    /// |J1 - (J_skew + J_sym + J_mix)| / max(|J1|, tiny)
    double split_defect() const;
    /// J_mix - R J0 - J_skew_pert - J3
    double mix_defect(double R) const { return J_mix - R * J0 - J_skew_pert - J3; }
};

JTerms appendix_decomposition(const DiracOperator& op, const Perturbation& P, const SpinorField& v, double R,
                              const CarlemanGeometry& geom);

}  // namespace ucplab
