#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ucplab/clifford.hpp"
#include "ucplab/field.hpp"

namespace ucplab {

using SliceMatrix = Eigen::MatrixXcd;

/// First-order operator in product form cl(dt) (d/dt + B_t + C_t), sampled slice by slice.
///
/// B_t is self-adjoint and C_t skew-adjoint with respect to the slice inner
/// product (trapezoid weights on the slice). cl(dt) is unitary.
class DiracOperator {
public:
    DiracOperator(Domain domain, CliffordFrame frame, std::vector<SliceMatrix> cl_dt, std::vector<SliceMatrix> B,
                  std::vector<SliceMatrix> C);

    const Domain& domain() const { return domain_; }
    const CliffordFrame& frame() const { return frame_; }
    std::size_t slices() const { return B_.size(); }
    std::size_t slice_dim() const { return static_cast<std::size_t>(B_.front().rows()); }

    const SliceMatrix& cl_dt(std::size_t i) const { return cl_dt_[i]; }
    const SliceMatrix& B(std::size_t i) const { return B_[i]; }
    const SliceMatrix& C(std::size_t i) const { return C_[i]; }

    /// Zeroth-order terms absorbed so far (sum of R fields), zero if none.
    const std::vector<SliceMatrix>& absorbed() const { return absorbed_; }

    /// max_i ||B_i - B_i^*|| / max(1, ||B_i||)
    double self_adjoint_defect() const;
    /// max_i ||C_i + C_i^*|| / max(1, ||C_i||)
    double skew_adjoint_defect() const;
    /// max_i ||cl_dt_i^* cl_dt_i - I||
    double unitarity_defect() const;

    /// Largest operator 2-norm over slices of B_t and of C_t.
    double max_B_norm() const;
    double max_C_norm() const;

private:
    friend DiracOperator absorb_homomorphism(const DiracOperator&, const std::vector<SliceMatrix>&);

    Domain domain_;
    CliffordFrame frame_;
    std::vector<SliceMatrix> cl_dt_;
    std::vector<SliceMatrix> B_;
    std::vector<SliceMatrix> C_;
    std::vector<SliceMatrix> absorbed_;
};

/// Adjoint of a slice operator under the weighted inner product:
/// M^* = W^{-1} M^H W, with W = diag(point weights) expanded over fiber components.
SliceMatrix slice_adjoint(const SliceMatrix& M, const std::vector<double>& point_weights);

/// d/dt by second-order centered differences, second-order one-sided at the two ends.
SpinorField normal_derivative(const SpinorField& u);

/// cl(dt) (du/dt + B_t u + C_t u), evaluated slice-wise.
SpinorField dirac_apply(const DiracOperator& op, const SpinorField& u);

/// Split arbitrary slice operators into B_t = (M + M^*)/2 and C_t = (M - M^*)/2.
DiracOperator product_decompose(const Domain& domain, const CliffordFrame& frame, std::vector<SliceMatrix> cl_dt,
                                const std::vector<SliceMatrix>& raw);

/// Product form of D + R: S = cl(dt)^* R is split into symmetric and skew parts
/// which are added to B_t and C_t.
DiracOperator absorb_homomorphism(const DiracOperator& op, const std::vector<SliceMatrix>& R);

/// Coefficients of the 1D model operator J (d/dt + B0 + t B1 + C).
struct IntervalModel {
    Mat2 B0 = Mat2::Zero();
    Mat2 B1 = Mat2::Zero();
    Mat2 C = Mat2::Zero();
};

/// 1D operator on an interval in product form; cl(dt) is the dimension-1 generator J.
DiracOperator interval_operator(const IntervalDomain& grid, const IntervalModel& model = {});

/// Flat Dirac operator g_1 d/dx + g_2 d/dy on a polar annulus.
///
/// The tangential parts are obtained by splitting cl(dr)^{-1} cl(e_theta) r^{-1} d/dtheta
/// with product_decompose. d/dtheta is the periodic second-order centered difference.
DiracOperator annulus_operator(const AnnulusDomain& grid);

/// Periodic second-order centered difference matrix in theta (ntheta x ntheta, real).
Eigen::MatrixXd angular_difference(const AnnulusDomain& grid);

}  // namespace ucplab
