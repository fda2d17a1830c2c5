#include "ucplab/sw/flow.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ucplab/clifford.hpp"

namespace ucplab::sw {

namespace {

double sup_psi_sq(const SpinorField& psi) {
    double s = 0.0;
    for (std::size_t p = 0; p < psi.points(); ++p) s = std::max(s, psi.at(p).squaredNorm());
    return s;
}

FlowRecord record(const SWConfiguration& c, const PerturbationParams& p, Case which, std::size_t step, double t) {
    const auto r = sw_residual(c);
    return {step, t, csd(c, p, which), r.curvature, r.dirac, sup_psi_sq(c.psi)};
}

/// (1 + dt L)^{-1} applied mode by mode, L = (curl, 2 D_0).
SWConfiguration implicit_solve(const Lattice& L, const SWConfiguration& rhs, double dt) {
    const std::size_t n = L.side();
    std::array<ComplexField, 3> bh;
    std::array<ComplexField, 2> ph;
    for (int j = 0; j < 3; ++j) {
        const auto bj = component(rhs.b, j);
        bh[static_cast<std::size_t>(j)] = L.dft(ComplexField(bj.begin(), bj.end()));
    }
    for (std::size_t s = 0; s < 2; ++s) {
        ComplexField f(L.points());
        for (std::size_t q = 0; q < L.points(); ++q) f[q] = rhs.psi(q, s);
        ph[s] = L.dft(f);
    }
    const cplx I{0.0, 1.0};
    for (std::size_t q = 0; q < L.points(); ++q) {
        const double k1 = L.wavenumber(q / (n * n)), k2 = L.wavenumber((q / n) % n), k3 = L.wavenumber(q % n);
        Eigen::Matrix3cd A = Eigen::Matrix3cd::Identity();
        // curl symbol: i k x
        A(0, 1) += -dt * I * k3;
        A(0, 2) += dt * I * k2;
        A(1, 0) += dt * I * k3;
        A(1, 2) += -dt * I * k1;
        A(2, 0) += -dt * I * k2;
        A(2, 1) += dt * I * k1;
        const Eigen::Vector3cd bv(bh[0][q], bh[1][q], bh[2][q]);
        const Eigen::Vector3cd bx = A.partialPivLu().solve(bv);
        // 2 D_0 symbol: -2 sigma.k
        Mat2 S;
        S << cplx{k3, 0.0}, cplx{k1, -k2}, cplx{k1, k2}, cplx{-k3, 0.0};
        const Mat2 B = Mat2::Identity() - 2.0 * dt * S;
        if (std::abs(A.determinant()) < 1e-12 || std::abs(B.determinant()) < 1e-12)
            throw FlowInstability("semi-implicit step is singular for this dt");
        const Vec2 px = B.partialPivLu().solve(Vec2(ph[0][q], ph[1][q]));
        for (std::size_t j = 0; j < 3; ++j) bh[j][q] = bx(static_cast<Eigen::Index>(j));
        ph[0][q] = px(0);
        ph[1][q] = px(1);
    }
    SWConfiguration out = rhs;
    for (int j = 0; j < 3; ++j) {
        const auto back = L.idft(bh[static_cast<std::size_t>(j)]);
        for (std::size_t q = 0; q < L.points(); ++q) out.b[3 * q + static_cast<std::size_t>(j)] = back[q].real();
    }
    for (std::size_t s = 0; s < 2; ++s) {
        const auto back = L.idft(ph[s]);
        for (std::size_t q = 0; q < L.points(); ++q) out.psi(q, s) = back[q];
    }
    return out;
}

}  // namespace

const char* to_string(FlowScheme s) { return s == FlowScheme::explicit_euler ? "explicit" : "semi-implicit"; }

FlowScheme parse_scheme(const std::string& s) {
    if (s == "explicit") return FlowScheme::explicit_euler;
    if (s == "semi-implicit") return FlowScheme::semi_implicit;
    throw PreconditionError("unknown flow scheme '" + s + "'");
}

double flow_spectral_bound(const SWConfiguration& c) {
    double sup_b = 0.0;
    for (std::size_t q = 0; q < c.psi.points(); ++q)
        sup_b = std::max(sup_b, std::hypot(c.b[3 * q], c.b[3 * q + 1], c.b[3 * q + 2]));
    return 2.0 * std::sqrt(3.0) * c.N + sup_b + sup_psi_sq(c.psi);
}

SWConfiguration flow_step(const SWConfiguration& c, const PerturbationParams& p, Case which, double dt,
                          FlowScheme scheme, double energy_tol) {
    if (!(dt > 0.0)) throw PreconditionError("flow_step needs dt > 0");
    if (scheme == FlowScheme::explicit_euler && dt * flow_spectral_bound(c) >= 2.0)
        throw FlowInstability("explicit step dt = " + std::to_string(dt) + " exceeds the stability bound " +
                              std::to_string(2.0 / flow_spectral_bound(c)));
    const auto g = grad_csd(c, p, which);
    SWConfiguration next;
    if (scheme == FlowScheme::explicit_euler) {
        next = displace(c, -dt, g);
    } else {
        // c - dt (g - L c), then invert (1 + dt L)
        const Lattice L = c.lattice();
        Tangent linear{L.curl(c.b), dirac3(L, VectorField(c.b.size(), 0.0), c.psi)};
        linear.phi *= 2.0;
        Tangent explicit_part = g;
        explicit_part.axpy(-1.0, linear);
        next = implicit_solve(L, displace(c, -dt, explicit_part), dt);
    }
    const double before = csd(c, p, which), after = csd(next, p, which);
    if (!std::isfinite(after) || after > before + energy_tol * std::max(1.0, std::abs(before)))
        throw FlowInstability("csd increased from " + std::to_string(before) + " to " + std::to_string(after));
    return next;
}

FlowResult integrate_flow(const SWConfiguration& c0, const PerturbationParams& p, Case which, const FlowOptions& opts) {
    FlowResult out;
    out.final = c0;
    out.trajectory.push_back(record(c0, p, which, 0, 0.0));
    out.stop_reason = "max-steps";
    for (std::size_t step = 1; step <= opts.max_steps; ++step) {
        if (opts.scheme == FlowScheme::explicit_euler && opts.dt * flow_spectral_bound(out.final) >= 2.0) {
            out.stop_reason = "step-bound";
            break;
        }
        try {
            out.final = flow_step(out.final, p, which, opts.dt, opts.scheme, opts.energy_tol);
        } catch (const FlowInstability&) {
            out.monotone = false;
            out.stop_reason = "instability";
            break;
        }
        const auto r = record(out.final, p, which, step, opts.dt * static_cast<double>(step));
        const bool done = r.curvature_residual < opts.residual_tol && r.dirac_residual < opts.residual_tol;
        const bool diverged = std::abs(r.csd) > opts.blowup || r.sup_psi_sq > opts.blowup;
        if (step % opts.record_every == 0 || done || diverged || step == opts.max_steps) out.trajectory.push_back(r);
        if (done) {
            out.converged = true;
            out.stop_reason = "converged";
            break;
        }
        if (diverged) {
            out.stop_reason = "diverged";
            break;
        }
    }
    if (out.trajectory.size() == 1) out.converged = out.trajectory[0].curvature_residual < opts.residual_tol &&
                                                    out.trajectory[0].dirac_residual < opts.residual_tol;
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, const std::vector<FlowRecord>& rows) {
    std::ofstream f(path);
    if (!f) throw std::ios_base::failure("cannot open " + path.string());
    f << "step,time,csd,curvature_residual,dirac_residual,sup_psi_sq\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.step, r.time, r.csd,
                      r.curvature_residual, r.dirac_residual, r.sup_psi_sq);
        f << buf;
    }
    if (!f) throw std::ios_base::failure("write failed for " + path.string());
}

}  // namespace ucplab::sw
