#include "ucplab/counterexamples.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ucplab/perturbation.hpp"

namespace ucplab {

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

double gauss(const std::function<double(double)>& f, double lo, double hi) {
    const double m = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    double s = 0.0;
    for (std::size_t k = 0; k < 5; ++k) s += kGaussWeights[k] * f(m + r * kGaussNodes[k]);
    return s * r;
}

/// int_lo^hi f, split at the breakpoints inside (lo, hi).
double integrate(const Profile& p, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    std::vector<double> cuts{lo};
    for (double b : p.breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) s += gauss(p.a, cuts[k], cuts[k + 1]);
    return s;
}

/// Derivative weights at x_eval of the Lagrange interpolant through nodes xs.
std::array<double, 5> lagrange_derivative(const std::array<double, 5>& xs, double x_eval) {
    std::array<double, 5> w{};
    for (std::size_t k = 0; k < 5; ++k) {
        double denom = 1.0;
        for (std::size_t m = 0; m < 5; ++m)
            if (m != k) denom *= xs[k] - xs[m];
        double num = 0.0;
        for (std::size_t l = 0; l < 5; ++l) {
            if (l == k) continue;
            double prod = 1.0;
            for (std::size_t m = 0; m < 5; ++m)
                if (m != k && m != l) prod *= x_eval - xs[m];
            num += prod;
        }
        w[k] = num / denom;
    }
    return w;
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

std::vector<double> nodes(const IntervalDomain& g) {
    std::vector<double> x(g.n);
    for (std::size_t i = 0; i < g.n; ++i) x[i] = g.node(i);
    x.back() = g.t1;
    return x;
}

IntervalDomain refine4(const IntervalDomain& g) { return {g.t0, g.t1, 4 * (g.n - 1) + 1}; }

std::vector<double> peano_closed_form(PeanoCase c, double branch, const std::vector<double>& x) {
    std::vector<double> u(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - branch;
        if (d > 0.0) u[i] = c == PeanoCase::sqrt_rhs ? d * d : d * d * d;
    }
    return u;
}

double peano_residual(PeanoCase c, const std::vector<double>& x, const std::vector<double>& u,
                      const std::vector<double>& breaks) {
    const auto du = piecewise_derivative(x, u, breaks);
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(du[i] - peano_rhs(c, u[i])));
    return r;
}

}  // namespace

const char* to_string(PeanoCase c) { return c == PeanoCase::sqrt_rhs ? "sqrt" : "two-thirds"; }

double peano_rhs(PeanoCase c, double u) {
    if (c == PeanoCase::sqrt_rhs) return 2.0 * std::sqrt(std::abs(u));
    const double r = std::cbrt(std::abs(u));
    return 3.0 * r * r;
}

bool BranchedSolution::demonstrates_failure(double tol) const {
    return agree_diff < 1e-10 && split_diff > 1e-4 && residual_u0 < tol && residual_u1 < tol;
}

std::vector<double> piecewise_derivative(const std::vector<double>& x, const std::vector<double>& u,
                                         const std::vector<double>& breakpoints) {
    if (x.size() != u.size()) throw DomainMismatch("piecewise_derivative: x and u differ in length");
    const std::size_t n = x.size();
    if (n < 5) throw PreconditionError("piecewise_derivative: need at least 5 nodes");
    const double tol = 1e-9 * (x[1] - x[0]);
    std::vector<double> cuts;
    for (double b : breakpoints)
        if (b > x.front() + tol && b < x.back() - tol) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    // a node on a breakpoint is shared by both pieces and differentiated in the right one
    const std::size_t pieces = cuts.size() + 1;
    std::vector<std::size_t> first(pieces, n), last(pieces, 0), owner(n);
    for (std::size_t j = 0; j < n; ++j) {
        owner[j] = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), x[j] + tol) - cuts.begin());
        for (std::size_t k = 0; k < pieces; ++k) {
            const double left = k == 0 ? -INFINITY : cuts[k - 1];
            const double right = k == cuts.size() ? INFINITY : cuts[k];
            if (x[j] >= left - tol && x[j] <= right + tol) {
                first[k] = std::min(first[k], j);
                last[k] = std::max(last[k], j);
            }
        }
    }
    std::vector<double> du(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t s = first[owner[j]], e = last[owner[j]];
        if (e < s + 4) throw PreconditionError("piecewise_derivative: a smooth piece has fewer than 5 nodes");
        const std::size_t lo = std::clamp<std::size_t>(j < 2 ? 0 : j - 2, s, e - 4);
        std::array<double, 5> xs{};
        for (std::size_t k = 0; k < 5; ++k) xs[k] = x[lo + k];
        const auto w = lagrange_derivative(xs, x[j]);
        double d = 0.0;
        for (std::size_t k = 0; k < 5; ++k) d += w[k] * u[lo + k];
        du[j] = d;
    }
    return du;
}

BranchedSolution peano_branches(PeanoCase c, double branch_point, const IntervalDomain& grid) {
    validate(grid);
    if (!(branch_point > grid.t0 && branch_point < grid.t1))
        throw PreconditionError("peano_branches: branch point must lie strictly inside the grid");
    BranchedSolution s;
    s.label = std::string("peano-") + to_string(c);
    s.x = nodes(grid);
    s.u0.assign(grid.n, 0.0);
    s.u1 = peano_closed_form(c, branch_point, s.x);
    s.agree_lo = grid.t0;
    s.agree_hi = branch_point;
    s.breakpoints = {branch_point};

    s.residual_u0 = peano_residual(c, s.x, s.u0, {});
    s.residual_u1 = peano_residual(c, s.x, s.u1, s.breakpoints);
    const auto fine = nodes(refine4(grid));
    s.residual_u1_fine = peano_residual(c, fine, peano_closed_form(c, branch_point, fine), s.breakpoints);

    std::size_t k = 0;
    while (k < grid.n && s.x[k] <= branch_point) ++k;
    s.agree_diff = sup_abs_diff(s.u0, s.u1, 0, k);
    s.split_diff = sup_abs_diff(s.u0, s.u1, k, grid.n);

    // RK4 from (c + eps, u1(c + eps)) with h = domain / 4096
    const double h = (grid.t1 - grid.t0) / 4096.0;
    const double x0 = branch_point + 0.05 * (grid.t1 - branch_point);
    const double d0 = x0 - branch_point;
    double u = c == PeanoCase::sqrt_rhs ? d0 * d0 : d0 * d0 * d0;
    double xx = x0, worst = 0.0;
    while (xx < grid.t1 - 1e-14) {
        const double step = std::min(h, grid.t1 - xx);
        const double k1 = peano_rhs(c, u);
        const double k2 = peano_rhs(c, u + 0.5 * step * k1);
        const double k3 = peano_rhs(c, u + 0.5 * step * k2);
        const double k4 = peano_rhs(c, u + step * k3);
        u += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        xx += step;
        const double d = xx - branch_point;
        worst = std::max(worst, std::abs(u - (c == PeanoCase::sqrt_rhs ? d * d : d * d * d)));
    }
    s.shooting_error = worst;
    return s;
}

Profile smoothed_indicator(double lo, double hi, double height, double collar) {
    if (!(hi - lo > 2.0 * collar) || !(collar > 0.0)) throw PreconditionError("smoothed_indicator: collar too wide");
    Profile p;
    p.a = [=](double x) {
        if (x <= lo || x >= hi) return 0.0;
        auto step = [](double t) {
            if (t >= 1.0) return 1.0;
            return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
        };
        return height * step((x - lo) / collar) * step((hi - x) / collar);
    };
    p.breakpoints = {lo, lo + collar, hi - collar, hi};
    return p;
}

BranchedSolution rank_one_counterexample(const Profile& profile, const IntervalDomain& grid, Normalization policy) {
    validate(grid);
    if (std::abs(grid.t0) > 1e-15 || std::abs(grid.t1 - 2.0) > 1e-15)
        throw PreconditionError("rank_one_counterexample: grid must span [0, 2]");
    const auto x = nodes(grid);
    for (double xi : x)
        if (xi <= 1.0 && profile.a(xi) != 0.0)
            throw PreconditionError("rank_one_counterexample: profile must vanish on [0, 1]");

    const double target = std::sqrt(2.0);
    const double mass = integrate(profile, 1.0, 2.0);
    double scale = 1.0;
    if (std::abs(mass - target) > 1e-10) {
        if (policy == Normalization::reject || mass == 0.0)
            throw PreconditionError("rank_one_counterexample: int_1^2 a = " + std::to_string(mass) + ", expected sqrt 2");
        scale = target / mass;
    }
    Profile scaled{[f = profile.a, scale](double t) { return scale * f(t); }, profile.breakpoints};

    BranchedSolution s;
    s.label = "rank-one";
    s.x = x;
    s.u0.assign(grid.n, 0.0);
    s.u1.assign(grid.n, 0.0);
    s.profile.resize(grid.n);
    s.normalization_scale = scale;
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        s.profile[i] = scaled.a(x[i]);
        if (i > 0 && x[i] > 1.0) acc += integrate(scaled, std::max(1.0, x[i - 1]), x[i]);
        s.u1[i] = acc;
    }
    s.agree_lo = 0.0;
    s.agree_hi = 1.0;
    s.breakpoints = scaled.breakpoints;
    s.endpoint = s.u1.back();

    SpinorField uf(grid), af(grid);
    for (std::size_t i = 0; i < grid.n; ++i) {
        uf(i, 0) = s.u1[i];
        af(i, 0) = s.profile[i];
    }
    s.inner_product = l2_inner(uf, af).real();
    const auto P = Perturbation::rank_one(af);
    auto residual = [&](const std::vector<double>& xs, const std::vector<double>& us, const SpinorField& pu) {
        const auto du = piecewise_derivative(xs, us, s.breakpoints);
        double r = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) r = std::max(r, std::abs(du[i] - pu(i, 0).real()));
        return r;
    };
    s.residual_u1 = residual(x, s.u1, P(uf));
    s.residual_u0 = residual(x, s.u0, P(SpinorField(grid)));

    const auto fg = refine4(grid);
    const auto xf = nodes(fg);
    std::vector<double> uf_vals(fg.n, 0.0);
    SpinorField uff(fg), aff(fg);
    acc = 0.0;
    for (std::size_t i = 0; i < fg.n; ++i) {
        if (i > 0 && xf[i] > 1.0) acc += integrate(scaled, std::max(1.0, xf[i - 1]), xf[i]);
        uf_vals[i] = acc;
        uff(i, 0) = acc;
        aff(i, 0) = scaled.a(xf[i]);
    }
    s.residual_u1_fine = residual(xf, uf_vals, Perturbation::rank_one(aff)(uff));

    std::size_t k = 0;
    while (k < grid.n && x[k] <= 1.0) ++k;
    s.agree_diff = sup_abs_diff(s.u0, s.u1, 0, k);
    s.split_diff = sup_abs_diff(s.u0, s.u1, k, grid.n);
    return s;
}

void write_branch_csv(std::ostream& out, const BranchedSolution& s) {
    out << "x,u0,u1\n";
    char buf[96];
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.x[i], s.u0[i], s.u1[i]);
        out << buf;
    }
}

}  // namespace ucplab
