#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ucplab/sw/model.hpp"

namespace ucplab::sw {

enum class FlowScheme { explicit_euler, semi_implicit };

const char* to_string(FlowScheme s);
FlowScheme parse_scheme(const std::string& s);

/// Upper bound on the spectral radius of the linearized gradient at c:
/// 2 sqrt(3) N + sup|b| + sup|psi|^2.
double flow_spectral_bound(const SWConfiguration& c);

/// One step of d/dt c = -grad csd.
///
/// The explicit scheme needs dt * flow_spectral_bound(c) < 2. The semi-implicit scheme
/// solves (1 + dt L) c' = c - dt (grad - L c) mode by mode, with L the curl and 2 D_0
/// parts. Throws FlowInstability on a violated step bound or when csd grows by more than
/// energy_tol * max(1, |csd|).
SWConfiguration flow_step(const SWConfiguration& c, const PerturbationParams& p, Case which, double dt,
                          FlowScheme scheme = FlowScheme::explicit_euler, double energy_tol = 1e-12);

struct FlowRecord {
    std::size_t step = 0;
    double time = 0.0;
    double csd = 0.0;
    double curvature_residual = 0.0;
    double dirac_residual = 0.0;
    double sup_psi_sq = 0.0;
};

struct FlowOptions {
    double dt = 1e-2;
    std::size_t max_steps = 1000;
    FlowScheme scheme = FlowScheme::explicit_euler;
    double residual_tol = 1e-6;
    double energy_tol = 1e-12;
    double blowup = 1e6;  ///< stop once |csd| or sup|psi|^2 exceeds this
    std::size_t record_every = 1;
};

struct FlowResult {
    SWConfiguration final;
    std::vector<FlowRecord> trajectory;
    bool converged = false;     ///< both residual norms below residual_tol
    bool monotone = true;       ///< csd never increased at an accepted step
    /// converged | max-steps | diverged | step-bound (the state grew past the explicit
    /// stability region of dt) | instability (csd increased)
    std::string stop_reason;
};

FlowResult integrate_flow(const SWConfiguration& c0, const PerturbationParams& p, Case which, const FlowOptions& opts);

/// Columns: step, time, csd, curvature_residual, dirac_residual, sup_psi_sq.
void write_trajectory_csv(const std::filesystem::path& path, const std::vector<FlowRecord>& rows);

}  // namespace ucplab::sw
