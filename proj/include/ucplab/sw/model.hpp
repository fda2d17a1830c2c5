#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ucplab/field.hpp"
#include "ucplab/sw/lattice.hpp"
#include "ucplab/sw/smooth_function.hpp"

namespace ucplab::sw {

/// Connection offset a = i b (b real, three components) and a two-component spinor.
struct SWConfiguration {
    int N = 1;
    VectorField b;
    SpinorField psi;

    static SWConfiguration zero(int N);
    /// Gaussian lattice values times amplitude, low-passed to |k_j| <= max_mode (max_mode < 0 keeps all).
    static SWConfiguration random(int N, double amplitude, std::uint64_t seed, int max_mode = -1);

    Lattice lattice() const { return Lattice(N); }
    void check() const;
};

/// Variation (alpha, phi) with alpha = i beta.
struct Tangent {
    VectorField beta;
    SpinorField phi;

    static Tangent zero(int N);
    static Tangent random(int N, double amplitude, std::uint64_t seed);

    Tangent& axpy(double s, const Tangent& x);
};

/// int beta.beta' + Re int <phi, phi'>
double tangent_dot(const Tangent& x, const Tangent& y);

/// config + s * direction
SWConfiguration displace(const SWConfiguration& c, double s, const Tangent& direction);

enum class Case { unperturbed, case1, case2 };
const char* to_string(Case c);
Case parse_case(const std::string& s);

/// Observable bases and perturbation functions.
///
/// mu_j = i m_j and nu_j = i n_j are imaginary 1-forms stored through their real
/// parts. The first three m_j are the L^2-normalized harmonic forms dx^j. p3 is a
/// function of s_l = |eta_l|^2, which makes it invariant under constant phases.
struct PerturbationParams {
    std::vector<VectorField> mu;
    std::vector<VectorField> nu;
    std::vector<SpinorField> eigenspinors;
    std::vector<double> eigenvalues;
    std::vector<std::array<int, 3>> eigen_modes;
    SmoothFunction p1;  ///< of tau
    SmoothFunction p2;  ///< of zeta
    SmoothFunction p3;  ///< of |eta|^2
    std::vector<double> epsilon;  ///< Floer weights, default 4^{-k}/k!

    /// Bases for lattice N with all perturbation functions zero.
    static PerturbationParams flat(int N, std::size_t n_mu = 6, std::size_t n_nu = 3, std::size_t n_eigen = 4);
    /// flat() plus the shipped nonzero p1, p2, p3 (p1 periodic in tau_1..3 with the winding period).
    static PerturbationParams standard(int N);

    /// Largest |d* mu_j| over the grid.
    double coclosed_defect(int N) const;
    /// Largest |D_{A0} psi_l - lambda_l psi_l| over the grid.
    double eigen_residual(int N) const;
    /// Largest |<psi_l, psi_m> - delta_lm|.
    double orthonormality_defect() const;

    /// FNV-1a of a canonical text form.
    std::uint64_t hash() const;
};

/// tau_j shift under winding e_j: 2 (2 pi)^{3/2}.
double winding_period();

struct Observables {
    std::vector<double> tau;
    std::vector<double> zeta;
    std::vector<cplx> eta;
};

/// D_A psi = sum_j g_j (d_j + a_j / 2) psi = sum_j i sigma_j d_j psi - (b.sigma) psi / 2
SpinorField dirac3(const SWConfiguration& c);
/// D_{A} for an explicit b, applied to any spinor on the same lattice.
SpinorField dirac3(const Lattice& L, const VectorField& b, const SpinorField& psi);

/// psi^* sigma_j psi as a real vector field.
VectorField sigma_quadratic(const SpinorField& psi);
/// Re(psi^* sigma_j phi) as a real vector field.
VectorField sigma_polarized(const SpinorField& psi, const SpinorField& phi);

struct SwResidual {
    double curvature = 0.0;  ///< || curl b - psi^* sigma psi / 2 ||_{L^2}
    double dirac = 0.0;      ///< || D_A psi ||_{L^2}
};

SwResidual sw_residual(const SWConfiguration& c);

Observables observables(const SWConfiguration& c, const PerturbationParams& p);

/// int <psi, D_A psi> (real up to rounding).
cplx dirac_energy(const SWConfiguration& c);

/// (1/2) int b.curl b + int <psi, D_A psi> + p1(tau) + p2(zeta) [+ p3(|eta|^2)]
double csd(const SWConfiguration& c, const PerturbationParams& p, Case which);

/// L^2 gradient for the metric int beta.beta' + Re int <phi, phi'>.
Tangent grad_csd(const SWConfiguration& c, const PerturbationParams& p, Case which);

struct FloerNormOptions {
    int k_max = 6;
    double box = 1.0;          ///< sup over [-box, box]^dim
    std::size_t samples = 64;  ///< random points in addition to corners and centre
    std::uint64_t seed = 1;
};

struct FloerNorm {
    double value = 0.0;
    std::vector<double> terms;     ///< eps_k (sup|D^k p1| + sup|D^k p2|), k = 0..k_max
    double remainder_estimate = 0.0;  ///< sum of the next four terms
};

/// Throws PreconditionError if k_max exceeds the supported order (16) or epsilon is too short.
FloerNorm floer_norm(const PerturbationParams& p, const FloerNormOptions& opts = {});

/// u = exp(i (f + winding.x)): b -> b - 2 (grad f + winding), psi -> u psi.
SWConfiguration gauge_apply(const SWConfiguration& c, const RealField& f, const std::array<int, 3>& winding);

enum class BoundVerdict { pass, fail, inconclusive };
const char* to_string(BoundVerdict v);

struct ScalarBound {
    BoundVerdict verdict = BoundVerdict::inconclusive;
    double sup_psi_sq = 0.0;
    SwResidual residual;
};

/// sup|psi|^2 <= max(0, -s) + tol with s = 0 on the flat torus; inconclusive unless
/// both residual norms are below residual_tol.
ScalarBound scalar_bound_check(const SWConfiguration& c, double residual_tol = 1e-6, double tol = 1e-6);

}  // namespace ucplab::sw
