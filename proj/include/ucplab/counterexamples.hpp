#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ucplab/field.hpp"

namespace ucplab {

/// Two solutions of the same ODE that agree on [agree_lo, agree_hi] and separate afterwards.
struct BranchedSolution {
    std::string label;
    std::vector<double> x;
    std::vector<double> u0;  ///< trivial branch
    std::vector<double> u1;  ///< nontrivial branch
    double agree_lo = 0.0;
    double agree_hi = 0.0;
    std::vector<double> breakpoints;  ///< where u1 is only finitely smooth

    double residual_u0 = 0.0;       ///< sup |u0' - f(u0)|
    double residual_u1 = 0.0;       ///< sup |u1' - f(u1)|
    double residual_u1_fine = 0.0;  ///< same residual on a 4x refined grid
    double agree_diff = 0.0;        ///< sup |u1 - u0| on the agreement interval
    double split_diff = 0.0;        ///< sup |u1 - u0| after it
    std::optional<double> shooting_error;  ///< RK4 re-integration vs closed form

    // rank-one example only
    std::vector<double> profile;
    std::optional<double> inner_product;  ///< <u1, a> in L^2
    std::optional<double> endpoint;       ///< u1 at the right end
    std::optional<double> normalization_scale;

    /// Agreement below 1e-10, separation above 1e-4 and both residuals below tol.
    bool demonstrates_failure(double tol = 1e-6) const;
};

enum class PeanoCase { sqrt_rhs, two_thirds };

const char* to_string(PeanoCase c);

/// Right-hand side f(u) of u' = f(u): 2 sqrt|u| or 3 |u|^{2/3}.
double peano_rhs(PeanoCase c, double u);

/// u0 = 0 and u1 = (x - c)^2 or (x - c)^3 for x >= c, zero before.
/// Throws PreconditionError unless c lies strictly inside the grid.
BranchedSolution peano_branches(PeanoCase c, double branch_point, const IntervalDomain& grid);

/// Scalar profile with known breakpoints (kinks of some derivative).
struct Profile {
    std::function<double(double)> a;
    std::vector<double> breakpoints;
};

/// height * indicator[lo, hi] with smoothstep collars of width `collar` inside [lo, hi].
Profile smoothed_indicator(double lo = 1.0, double hi = 2.0, double height = 1.4142135623730951, double collar = 0.02);

enum class Normalization { reject, renormalize };

/// The rank-one example on [0, 2]: a vanishes on [0, 1], int_1^2 a = sqrt 2,
/// u = int_1^x a solves u' = <u, a> a. With Normalization::reject a profile whose
/// integral misses sqrt 2 by more than 1e-10 raises PreconditionError.
BranchedSolution rank_one_counterexample(const Profile& profile, const IntervalDomain& grid,
                                         Normalization policy = Normalization::renormalize);

/// d/dx of grid samples by 5-point stencils that never straddle a breakpoint.
std::vector<double> piecewise_derivative(const std::vector<double>& x, const std::vector<double>& u,
                                         const std::vector<double>& breakpoints);

/// CSV with header x,u0,u1.
void write_branch_csv(std::ostream& out, const BranchedSolution& s);

}  // namespace ucplab
