#include <cmath>
#include <future>

#include "ucplab/clifford.hpp"
#include "ucplab/harness/suites.hpp"
#include "ucplab/rng.hpp"
#include "ucplab/sw/flow.hpp"
#include "ucplab/sw/linearize.hpp"

namespace ucplab::harness {

namespace {

using namespace ucplab::sw;

/// f(0..n-1) evaluated with up to `jobs` concurrent tasks, results in index order.
template <class F>
auto parallel_map(std::size_t n, unsigned jobs, F f) {
    using R = decltype(f(std::size_t{0}));
    std::vector<R> out;
    out.reserve(n);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
        return out;
    }
    for (std::size_t start = 0; start < n; start += jobs) {
        std::vector<std::future<R>> batch;
        for (std::size_t i = start; i < std::min(n, start + jobs); ++i) batch.push_back(std::async(std::launch::async, f, i));
        for (auto& fut : batch) out.push_back(fut.get());
    }
    return out;
}

int lattice_size(const ExperimentConfig& cfg) {
    const auto N = cfg.integer("N");
    if (N < 1 || N > 16) throw PreconditionError("N must lie in [1, 16]");
    return static_cast<int>(N);
}

std::uint64_t derived_seed(std::uint64_t seed, std::size_t index, std::uint64_t salt) {
    return seed * 1000003ULL + static_cast<std::uint64_t>(index) * 7919ULL + salt;
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

}  // namespace

SuiteResult run_sw_gradcheck(const ExperimentConfig& cfg) {
    SuiteResult out;
    out.suite = "sw-gradcheck";
    const int N = lattice_size(cfg);
    const auto params = PerturbationParams::standard(N);
    const auto& hs = cfg.list("h");
    if (hs.size() < 2) throw PreconditionError("h needs at least two steps");
    const std::size_t configs = cfg.count("configs");
    const double amp = cfg.real("amplitude");
    const int max_mode = static_cast<int>(cfg.integer("max_mode"));

    struct Probe {
        double analytic = 0.0;
        std::vector<double> fd, err;
    };
    out.table.header = {"case", "config", "h", "directional_fd", "gradient_pairing", "abs_error", "order"};
    CriterionResult c{6, "central-difference convergence of the functional gradient"};
    double min_order = std::numeric_limits<double>::infinity();
    for (Case which : {Case::unperturbed, Case::case1, Case::case2}) {
        const auto probes = parallel_map(configs, cfg.jobs, [&](std::size_t i) {
            const auto x = SWConfiguration::random(N, amp, derived_seed(cfg.seed, i, 1), max_mode);
            const auto d = Tangent::random(N, amp, derived_seed(cfg.seed, i, 2));
            Probe p;
            p.analytic = tangent_dot(grad_csd(x, params, which), d);
            for (double h : hs) {
                p.fd.push_back((csd(displace(x, h, d), params, which) - csd(displace(x, -h, d), params, which)) / (2.0 * h));
                p.err.push_back(std::abs(p.fd.back() - p.analytic));
            }
            return p;
        });
        double case_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < probes.size(); ++i) {
            for (std::size_t k = 0; k < hs.size(); ++k) {
                std::string order;
                if (k > 0) {
                    const double o = std::log(probes[i].err[k - 1] / probes[i].err[k]) / std::log(hs[k - 1] / hs[k]);
                    case_min = std::min(case_min, o);
                    order = cell(o);
                }
                out.table.add_row({to_string(which), cell(i), cell(hs[k]), cell(probes[i].fd[k]), cell(probes[i].analytic),
                                   cell(probes[i].err[k]), order});
            }
        }
        c.add(std::string("min_order.") + to_string(which), case_min);
        min_order = std::min(min_order, case_min);
    }
    c.add("min_order", min_order);
    c.status = min_order >= cfg.real("min_order") ? Status::pass : Status::fail;
    c.detail = "smallest observed order " + cell(min_order) + " over " + cell(configs) + " configurations per case";
    out.criteria.push_back(c);
    return out;
}

SuiteResult run_sw_flow(const ExperimentConfig& cfg) {
    SuiteResult out;
    out.suite = "sw-flow";
    const int N = lattice_size(cfg);
    const auto params = PerturbationParams::flat(N);
    FlowOptions opts;
    opts.dt = cfg.real("dt");
    opts.max_steps = cfg.count("max_steps");
    opts.scheme = parse_scheme(cfg.text("scheme"));
    opts.residual_tol = cfg.real("residual_tolerance");
    const std::size_t configs = cfg.count("configs");

    const auto results = parallel_map(configs, cfg.jobs, [&](std::size_t i) {
        return integrate_flow(SWConfiguration::random(N, cfg.real("amplitude"), derived_seed(cfg.seed, i, 3)), params,
                              Case::unperturbed, opts);
    });
    out.table.header = {"config", "step", "time", "csd", "curvature_residual", "dirac_residual", "sup_psi_sq"};
    CriterionResult c{8, "gradient flow reaches a solution with sup |psi|^2 below the flat-torus bound"};
    bool ok = true;
    std::size_t converged = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        for (const auto& row : r.trajectory)
            out.table.add_row({cell(i), cell(row.step), cell(row.time), cell(row.csd), cell(row.curvature_residual),
                               cell(row.dirac_residual), cell(row.sup_psi_sq)});
        const auto& last = r.trajectory.back();
        const auto bound = scalar_bound_check(r.final, opts.residual_tol, cfg.real("psi_bound"));
        const bool good = r.converged && bound.verdict == BoundVerdict::pass;
        converged += r.converged ? 1 : 0;
        ok = ok && good;
        const std::string key = "config" + std::to_string(i);
        c.add(key + ".stop_reason", r.stop_reason);
        c.add(key + ".steps", static_cast<std::int64_t>(last.step));
        c.add(key + ".monotone", r.monotone);
        c.add(key + ".curvature_residual", last.curvature_residual);
        c.add(key + ".dirac_residual", last.dirac_residual);
        c.add(key + ".sup_psi_sq", last.sup_psi_sq);
        c.add(key + ".bound_verdict", std::string(to_string(bound.verdict)));
    }
    c.add("converged", static_cast<std::int64_t>(converged));
    c.status = ok ? Status::pass : Status::fail;
    c.detail = cell(converged) + " of " + cell(configs) + " trajectories reached residual < " +
               cell(opts.residual_tol) + " (" + results.front().stop_reason + " on the first)";
    out.criteria.push_back(c);
    return out;
}

SuiteResult run_observables(const ExperimentConfig& cfg) {
    SuiteResult out;
    out.suite = "observables";
    const int N = lattice_size(cfg);
    const Lattice L(N);
    const auto params = PerturbationParams::standard(N);
    const std::size_t configs = cfg.count("configs");
    const double amp = cfg.real("amplitude"), gamp = cfg.real("gauge_amplitude");
    out.table.header = {"check", "config", "value", "tolerance"};

    CriterionResult c7{7, "gauge invariance of zeta and eta, winding shift of tau"};
    double zeta_dev = 0.0, eta_dev = 0.0, tau_dev = 0.0, tau_h_dev = 0.0, csd_dev = 0.0;
    // predicted shift of tau_j under unit winding e_j: 2 int m_j^j by quadrature
    std::array<double, 3> predicted{};
    for (std::size_t j = 0; j < 3; ++j) {
        double s = 0.0;
        for (std::size_t q = 0; q < L.points(); ++q) s += params.mu[j][3 * q + j];
        predicted[j] = 2.0 * s * L.cell_volume();
    }
    for (std::size_t i = 0; i < configs; ++i) {
        const auto x = SWConfiguration::random(N, amp, derived_seed(cfg.seed, i, 4), 1);
        CounterRng rng(derived_seed(cfg.seed, i, 5));
        const double c1 = rng.normal(), c2 = rng.normal(), ph = rng.uniform() * 2.0 * kPi;
        RealField f(L.points());
        for (std::size_t q = 0; q < L.points(); ++q) {
            const auto p = L.coords(q);
            f[q] = gamp * (c1 * std::sin(p[0] + ph) + c2 * std::cos(p[1] - p[2]));
        }
        const auto o = observables(x, params);
        const auto og = observables(gauge_apply(x, f, {0, 0, 0}), params);
        double zd = sup_abs_diff(o.zeta, og.zeta), ed = 0.0;
        for (std::size_t l = 0; l < o.eta.size(); ++l) ed = std::max(ed, std::abs(o.eta[l] - og.eta[l]));
        const double hd = sup_abs_diff(o.tau, og.tau);
        const double cd = std::abs(csd(gauge_apply(x, f, {0, 0, 0}), params, Case::unperturbed) - csd(x, params, Case::unperturbed));
        double td = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            std::array<int, 3> w{0, 0, 0};
            w[j] = 1;
            const auto gw = gauge_apply(x, RealField(L.points(), 0.0), w);
            const auto ow = observables(gw, params);
            zd = std::max(zd, sup_abs_diff(o.zeta, ow.zeta));
            for (std::size_t k = 0; k < o.tau.size(); ++k)
                td = std::max(td, std::abs(ow.tau[k] - o.tau[k] - (k == j ? predicted[j] : 0.0)));
        }
        out.table.add_row({"zeta_gauge", cell(i), cell(zd), cell(cfg.real("zeta_tolerance"))});
        out.table.add_row({"eta_mean_zero_gauge", cell(i), cell(ed), cell(cfg.real("eta_tolerance"))});
        out.table.add_row({"tau_winding_shift", cell(i), cell(td), cell(cfg.real("tau_tolerance"))});
        out.table.add_row({"tau_mean_zero_gauge", cell(i), cell(hd), ""});
        out.table.add_row({"csd_mean_zero_gauge", cell(i), cell(cd), ""});
        zeta_dev = std::max(zeta_dev, zd);
        eta_dev = std::max(eta_dev, ed);
        tau_dev = std::max(tau_dev, td);
        tau_h_dev = std::max(tau_h_dev, hd);
        csd_dev = std::max(csd_dev, cd);
    }
    c7.add("zeta_deviation", zeta_dev);
    c7.add("eta_deviation", eta_dev);
    c7.add("tau_shift_deviation", tau_dev);
    c7.add("tau_shift_quadrature", predicted[0]);
    c7.add("tau_shift_closed_form", winding_period());
    c7.add("tau_mean_zero_deviation", tau_h_dev);
    c7.add("csd_mean_zero_deviation", csd_dev);
    const bool ok7 = zeta_dev <= cfg.real("zeta_tolerance") && eta_dev <= cfg.real("eta_tolerance") &&
                     tau_dev <= cfg.real("tau_tolerance");
    c7.status = ok7 ? Status::pass : Status::fail;
    c7.detail = "zeta " + cell(zeta_dev) + ", eta " + cell(eta_dev) + ", tau shift " + cell(tau_dev);
    out.criteria.push_back(c7);

    CriterionResult c9{9, "adjoint identity of the linearization and spinor-block admissibility"};
    const auto base = SWConfiguration::random(N, amp, derived_seed(cfg.seed, 0, 6));
    const Linearization lin(base);
    double adj_dev = 0.0;
    for (std::size_t k = 0; k < cfg.count("pairs"); ++k) {
        const auto x = Tangent::random(N, 1.0, derived_seed(cfg.seed, k, 7));
        const auto y = LinearRows::random(N, 1.0, derived_seed(cfg.seed, k, 8));
        const double lhs = rows_dot(lin.apply(x), y), rhs = tangent_dot(x, lin.adjoint(y));
        const double dev = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
        out.table.add_row({"adjoint_identity", cell(k), cell(dev), cell(cfg.real("adjoint_tolerance"))});
        adj_dev = std::max(adj_dev, dev);
    }
    double symbol_dev = 0.0;
    for (const std::array<int, 3>& k : {std::array<int, 3>{1, 0, 0}, {0, 1, -1}, {1, 1, 1}}) {
        Mat2 expected = Mat2::Zero();
        for (int j = 0; j < 3; ++j) expected -= static_cast<double>(k[static_cast<std::size_t>(j)]) * pauli(j);
        symbol_dev = std::max({symbol_dev, (lin.dirac_symbol(k, false) - expected).norm(),
                               (lin.dirac_symbol(k, true) - expected).norm()});
    }
    const auto setup = linearization_ucp_setup(base, params, Tangent::random(N, amp, derived_seed(cfg.seed, 0, 9)));
    double sampled_C0 = 0.0;
    bool admissible = true;
    for (std::size_t k = 0; k < cfg.count("pairs"); ++k) {
        const auto v = admissibility_bound(setup.case1, Tangent::random(N, 1.0, derived_seed(cfg.seed, k, 10)).phi);
        admissible = admissible && v.admissible;
        sampled_C0 = std::max(sampled_C0, v.C0);
    }
    out.table.add_row({"case1_sampled_C0", "0", cell(sampled_C0), cell(setup.case1_C0)});
    c9.add("adjoint_deviation", adj_dev);
    c9.add("symbol_deviation", symbol_dev);
    c9.add("case1_C0_recorded", setup.case1_C0);
    c9.add("case1_C0_sharp", setup.case1_C0_sharp);
    c9.add("case1_C0_sampled", sampled_C0);
    c9.add("coupling_admissible", setup.coupling_admissible);
    c9.add("coupling_sup", setup.coupling_sup);
    const bool ok9 = adj_dev <= cfg.real("adjoint_tolerance") && symbol_dev <= 1e-10 && admissible &&
                     sampled_C0 <= setup.case1_C0 * (1.0 + 1e-12);
    c9.status = ok9 ? Status::pass : Status::fail;
    c9.detail = "adjoint defect " + cell(adj_dev) + ", case I C0 sampled " + cell(sampled_C0) + " <= recorded " +
                cell(setup.case1_C0);
    out.criteria.push_back(c9);
    return out;
}

}  // namespace ucplab::harness
