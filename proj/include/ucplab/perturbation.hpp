#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "ucplab/clifford.hpp"
#include "ucplab/dirac.hpp"
#include "ucplab/field.hpp"

namespace ucplab {

enum class PerturbationKind {
    zero,
    pointwise_nonlinear,  ///< <u(x), a(x)> u(x)
    kernel_nonlocal,      ///< |int k(x,z) u(z) dz| u(x)
    rank_one_l2,          ///< <u, a>_{L^2} a(x)
    pointwise_linear,     ///< M(x) u(x), a fixed matrix field
    inhomogeneous,        ///< a(x), independent of u
};

const char* to_string(PerturbationKind k);

/// Zeroth-order, possibly nonlinear or nonlocal term u -> P(u) added to a Dirac-type operator.
class Perturbation {
public:
    static Perturbation zero(const Domain& domain);
    static Perturbation pointwise(SpinorField a);
    static Perturbation kernel(const Domain& domain, Eigen::MatrixXd k);
    static Perturbation rank_one(SpinorField a);
    static Perturbation pointwise_linear(const Domain& domain, std::vector<Mat2> matrices);
    static Perturbation inhomogeneous(SpinorField source);

    PerturbationKind kind() const { return kind_; }
    const Domain& domain() const { return domain_; }
    const SpinorField& spinor() const { return a_; }
    const Eigen::MatrixXd& kernel_samples() const { return k_; }
    const std::vector<Mat2>& matrices() const { return m_; }

    /// sup over the grid of |a(x)| (or of ||M(x)|| for the linear kind).
    double coefficient_sup() const;

    SpinorField operator()(const SpinorField& u) const;

private:
    Perturbation(PerturbationKind kind, Domain domain) : kind_(kind), domain_(domain) {}

    PerturbationKind kind_;
    Domain domain_;
    SpinorField a_;
    Eigen::MatrixXd k_;
    std::vector<Mat2> m_;
};

SpinorField eval_perturbation(const Perturbation& P, const SpinorField& u);

/// RK4 solution of J (u' + (B0 + t B1 + C) u) + P(u) = 0, u(t0) = u0, for pointwise kinds.
///
/// The step is twice the grid spacing so coefficients are sampled at nodes and
/// midpoints; the result lives on every other node ((n - 1) / 2 + 1 points, n odd).
SpinorField solve_ivp(const IntervalModel& model, const Perturbation& P, const Vec2& u0);

/// Contiguous range of point indices [begin, end).
struct Region {
    std::size_t begin = 0;
    std::size_t end = 0;

    static Region all(const SpinorField& u) { return {0, u.points()}; }
};

struct AdmissibilityVerdict {
    bool admissible = false;
    double C0 = 0.0;                ///< sampled sup of |P(u)(x)| / |u(x)|
    std::size_t witness_point = 0;  ///< where the sup (or the violation) occurs
    std::string failed_bound;       ///< empty when admissible
};

/// Smallest sampled C0 with |P(u)(x)| <= C0 |u(x)| on the region.
///
/// Points with |u(x)| <= zero_tol must have |P(u)(x)| <= zero_tol, otherwise the
/// verdict is non-admissible. Non-admissibility is a verdict, not an error.
AdmissibilityVerdict admissibility_bound(const Perturbation& P, const SpinorField& u, std::optional<Region> region = {},
                                         double zero_tol = 1e-12);

enum class UcpCondition { condition_i, condition_ii, neither };

const char* to_string(UcpCondition c);

struct UcpConditionReport {
    bool no_zero_run = false;       ///< (i): a has no run of >= min_run samples with |a| < zero_tol
    bool dominated = false;         ///< (ii): supp a lies in the interior of supp u
    double C0 = 0.0;                ///< sup |a| / |u| over supp a; finite only if dominated
    std::size_t longest_zero_run = 0;
    UcpCondition verdict = UcpCondition::neither;
};

/// Decide which sufficient condition for weak UCP of the rank-one perturbation holds.
/// Runs and interiors are taken along the storage order of grid points; a point is
/// interior to supp u when u is nonzero there and at both neighbours.
UcpConditionReport ucp_condition_check(const SpinorField& a, const SpinorField& u, double zero_tol = 1e-12,
                                       std::size_t min_run = 3);

}  // namespace ucplab
