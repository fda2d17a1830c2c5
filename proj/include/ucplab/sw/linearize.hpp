#pragma once

#include <string>
#include <vector>

#include "ucplab/perturbation.hpp"
#include "ucplab/sw/model.hpp"

namespace ucplab::sw {

/// Output of the linearized system: gauge-fixing, curvature and Dirac rows.
struct LinearRows {
    RealField gauge;
    VectorField curvature;
    SpinorField dirac;

    static LinearRows zero(int N);
    static LinearRows random(int N, double amplitude, std::uint64_t seed);
};

/// int g g' + int c.c' + Re int <d, d'>
double rows_dot(const LinearRows& x, const LinearRows& y);

/// Linearization of the monopole map at a configuration with a = i b, alpha = i beta:
///   gauge     = d* alpha + i Im<psi, phi>  ->  -div beta + Im(psi . conj phi)
///   curvature = *d alpha - sigma(psi, phi) ->  curl beta - Re(psi^* sigma phi)
///   dirac     = D_A phi + cl(alpha) psi / 2 ->  D_A phi - (beta.sigma) psi / 2
class Linearization {
public:
    explicit Linearization(SWConfiguration base);

    const SWConfiguration& base() const { return base_; }

    LinearRows apply(const Tangent& x) const;
    /// Adjoint for tangent_dot on the input and rows_dot on the output.
    Tangent adjoint(const LinearRows& y) const;

    /// 2x2 principal symbol of the Dirac block phi -> dirac row (or of its adjoint
    /// d' -> phi*), estimated from plane waves e^{ik.x} s minus the k = 0 response.
    Mat2 dirac_symbol(const std::array<int, 3>& k, bool adjoint) const;

private:
    SWConfiguration base_;
    Lattice lattice_;
};

/// (curl b - sigma(psi)/2, D_A psi): the nonlinear map whose derivative gives the last two rows.
LinearRows monopole_map(const SWConfiguration& c);

/// Zeroth-order terms of the pure-spinor block phi -> D_A phi + ..., as perturbation records.
struct SpinorBlockSetup {
    Perturbation coupling;        ///< cl(alpha) psi / 2, independent of phi
    double coupling_sup = 0.0;    ///< sup |cl(alpha) psi / 2|
    double coupling_witness = 0.0;  ///< sup|alpha| sup|psi| / 2
    bool coupling_admissible = false;
    std::string coupling_note;

    Perturbation case1;          ///< sum_j dp2/dzeta_j cl(nu_j) phi
    double case1_C0 = 0.0;       ///< sum_j |dp2/dzeta_j| sup|nu_j|
    double case1_C0_sharp = 0.0; ///< sup_x ||M(x)||

    std::vector<Perturbation> case2;  ///< rank-one terms <phi, w_l> w_l, w_l = e^{i theta} psi_l sqrt(dp3/ds_l)
    std::vector<double> case2_signs;  ///< sign of dp3/ds_l for each rank-one term
};

SpinorBlockSetup linearization_ucp_setup(const SWConfiguration& c, const PerturbationParams& p, const Tangent& direction);

}  // namespace ucplab::sw
