#include "ucplab/perturbation.hpp"

#include <cmath>

namespace ucplab {

const char* to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::zero: return "zero";
        case PerturbationKind::pointwise_nonlinear: return "pointwise-nonlinear";
        case PerturbationKind::kernel_nonlocal: return "kernel-nonlocal";
        case PerturbationKind::rank_one_l2: return "rank-one-L2";
        case PerturbationKind::pointwise_linear: return "pointwise-linear";
        case PerturbationKind::inhomogeneous: return "inhomogeneous";
    }
    return "unknown";
}

const char* to_string(UcpCondition c) {
    switch (c) {
        case UcpCondition::condition_i: return "condition (i)";
        case UcpCondition::condition_ii: return "condition (ii)";
        case UcpCondition::neither: return "neither";
    }
    return "unknown";
}

Perturbation Perturbation::zero(const Domain& domain) { return {PerturbationKind::zero, domain}; }

Perturbation Perturbation::pointwise(SpinorField a) {
    Perturbation p(PerturbationKind::pointwise_nonlinear, a.domain());
    p.a_ = std::move(a);
    return p;
}

Perturbation Perturbation::kernel(const Domain& domain, Eigen::MatrixXd k) {
    const auto n = static_cast<Eigen::Index>(point_count(domain));
    if (k.rows() != n || k.cols() != n) throw DomainMismatch("kernel samples must be points x points");
    Perturbation p(PerturbationKind::kernel_nonlocal, domain);
    p.k_ = std::move(k);
    return p;
}

Perturbation Perturbation::rank_one(SpinorField a) {
    Perturbation p(PerturbationKind::rank_one_l2, a.domain());
    p.a_ = std::move(a);
    return p;
}

Perturbation Perturbation::pointwise_linear(const Domain& domain, std::vector<Mat2> matrices) {
    if (matrices.size() != point_count(domain)) throw DomainMismatch("one matrix per grid point is required");
    Perturbation p(PerturbationKind::pointwise_linear, domain);
    p.m_ = std::move(matrices);
    return p;
}

Perturbation Perturbation::inhomogeneous(SpinorField source) {
    Perturbation p(PerturbationKind::inhomogeneous, source.domain());
    p.a_ = std::move(source);
    return p;
}

double Perturbation::coefficient_sup() const {
    switch (kind_) {
        case PerturbationKind::zero: return 0.0;
        case PerturbationKind::kernel_nonlocal: return k_.cwiseAbs().maxCoeff();
        case PerturbationKind::pointwise_linear: {
            double s = 0.0;
            for (const auto& m : m_) s = std::max(s, Eigen::JacobiSVD<Mat2>(m).singularValues()(0));
            return s;
        }
        default: return a_.sup_norm();
    }
}

SpinorField Perturbation::operator()(const SpinorField& u) const {
    if (!(u.domain() == domain_)) throw DomainMismatch("perturbation and field live on different grids");
    SpinorField out(domain_);
    switch (kind_) {
        case PerturbationKind::zero: break;
        case PerturbationKind::pointwise_nonlinear:
            for (std::size_t p = 0; p < u.points(); ++p) out.at(p) = herm(u.at(p), a_.at(p)) * u.at(p);
            break;
        case PerturbationKind::kernel_nonlocal: {
            const auto w = quadrature_weights(domain_);
            for (std::size_t x = 0; x < u.points(); ++x) {
                Vec2 acc = Vec2::Zero();
                for (std::size_t z = 0; z < u.points(); ++z)
                    acc += (k_(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z)) * w[z]) * u.at(z);
                out.at(x) = acc.norm() * u.at(x);
            }
            break;
        }
        case PerturbationKind::rank_one_l2: {
            const cplx c = l2_inner(u, a_);
            for (std::size_t p = 0; p < u.points(); ++p) out.at(p) = c * a_.at(p);
            break;
        }
        case PerturbationKind::pointwise_linear:
            for (std::size_t p = 0; p < u.points(); ++p) out.at(p) = m_[p] * u.at(p);
            break;
        case PerturbationKind::inhomogeneous: out = a_; break;
    }
    return out;
}

SpinorField eval_perturbation(const Perturbation& P, const SpinorField& u) { return P(u); }

namespace {

Vec2 pointwise_term(const Perturbation& P, std::size_t node, const Vec2& u) {
    switch (P.kind()) {
        case PerturbationKind::zero: return Vec2::Zero();
        case PerturbationKind::pointwise_nonlinear: return herm(u, P.spinor().at(node)) * u;
        case PerturbationKind::pointwise_linear: return P.matrices()[node] * u;
        case PerturbationKind::inhomogeneous: return P.spinor().at(node);
        default: throw PreconditionError("solve_ivp needs a pointwise perturbation");
    }
}

}  // namespace

SpinorField solve_ivp(const IntervalModel& model, const Perturbation& P, const Vec2& u0) {
    const auto* grid = std::get_if<IntervalDomain>(&P.domain());
    if (!grid) throw PreconditionError("solve_ivp needs an interval domain");
    if (grid->n < 3 || grid->n % 2 == 0) throw PreconditionError("solve_ivp needs an odd number of nodes >= 3");
    const Mat2 J = CliffordFrame::standard(1).generator(0);
    const double h = grid->spacing();
    // u' = -(B0 + t B1 + C) u + J P(u), since J^{-1} = -J
    auto rhs = [&](std::size_t node, const Vec2& u) -> Vec2 {
        const double t = grid->node(node) - grid->t0;
        return -(model.B0 + t * model.B1 + model.C) * u + J * pointwise_term(P, node, u);
    };
    const std::size_t steps = (grid->n - 1) / 2;
    SpinorField out(IntervalDomain{grid->t0, grid->t1, steps + 1});
    Vec2 u = u0;
    out.at(0) = u;
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t i = 2 * s;
        const Vec2 k1 = rhs(i, u);
        const Vec2 k2 = rhs(i + 1, u + h * k1);
        const Vec2 k3 = rhs(i + 1, u + h * k2);
        const Vec2 k4 = rhs(i + 2, u + 2.0 * h * k3);
        u += (h / 3.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.at(s + 1) = u;
    }
    return out;
}

AdmissibilityVerdict admissibility_bound(const Perturbation& P, const SpinorField& u, std::optional<Region> region,
                                         double zero_tol) {
    const auto r = region.value_or(Region::all(u));
    if (r.end > u.points() || r.begin > r.end) throw PreconditionError("admissibility region outside the grid");
    const auto pu = P(u);
    AdmissibilityVerdict v;
    v.admissible = true;
    for (std::size_t p = r.begin; p < r.end; ++p) {
        const double nu = u.point_norm(p);
        const double np = pu.point_norm(p);
        if (nu <= zero_tol) {
            if (np > zero_tol) {
                v.admissible = false;
                v.witness_point = p;
                v.failed_bound = "|P(u)(x)| <= C0 |u(x)| fails where u vanishes (point " + std::to_string(p) + ")";
                return v;
            }
            continue;
        }
        const double q = np / nu;
        if (q > v.C0) {
            v.C0 = q;
            v.witness_point = p;
        }
    }
    return v;
}

UcpConditionReport ucp_condition_check(const SpinorField& a, const SpinorField& u, double zero_tol,
                                       std::size_t min_run) {
    require_same_domain(a, u, "ucp_condition_check");
    UcpConditionReport rep;
    std::size_t run = 0;
    for (std::size_t p = 0; p < a.points(); ++p) {
        run = a.point_norm(p) < zero_tol ? run + 1 : 0;
        rep.longest_zero_run = std::max(rep.longest_zero_run, run);
    }
    rep.no_zero_run = rep.longest_zero_run < min_run;

    // supp a inside the interior of supp u: every point where a is nonzero has
    // u nonzero there and at both storage-order neighbours
    rep.dominated = true;
    const std::size_t n = a.points();
    for (std::size_t p = 0; p < n && rep.dominated; ++p) {
        const double na = a.point_norm(p);
        if (na <= zero_tol) continue;
        for (std::size_t q = p == 0 ? 0 : p - 1; q <= std::min(p + 1, n - 1); ++q)
            if (u.point_norm(q) <= zero_tol) rep.dominated = false;
        if (rep.dominated) rep.C0 = std::max(rep.C0, na / u.point_norm(p));
    }
    if (!rep.dominated) rep.C0 = std::numeric_limits<double>::infinity();

    if (rep.no_zero_run)
        rep.verdict = UcpCondition::condition_i;
    else if (rep.dominated)
        rep.verdict = UcpCondition::condition_ii;
    return rep;
}

}  // namespace ucplab
