#include "ucplab/dirac.hpp"

#include <cmath>

namespace ucplab {

namespace {

Eigen::VectorXd expand_weights(const std::vector<double>& point_weights) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(point_weights.size() * SpinorField::kRank));
    for (std::size_t p = 0; p < point_weights.size(); ++p)
        for (std::size_t c = 0; c < SpinorField::kRank; ++c)
            w(static_cast<Eigen::Index>(p * SpinorField::kRank + c)) = point_weights[p];
    return w;
}

std::size_t slice_count(const Domain& d) {
    if (const auto* g = std::get_if<IntervalDomain>(&d)) return g->n;
    if (const auto* g = std::get_if<AnnulusDomain>(&d)) return g->nr;
    throw PreconditionError("Dirac operators in product form need an interval or annulus domain");
}

}  // namespace

DiracOperator::DiracOperator(Domain domain, CliffordFrame frame, std::vector<SliceMatrix> cl_dt,
                             std::vector<SliceMatrix> B, std::vector<SliceMatrix> C)
    : domain_(domain), frame_(std::move(frame)), cl_dt_(std::move(cl_dt)), B_(std::move(B)), C_(std::move(C)) {
    validate(domain_);
    const auto n = slice_count(domain_);
    if (cl_dt_.size() != n || B_.size() != n || C_.size() != n)
        throw DomainMismatch("DiracOperator: one slice matrix per normal grid point is required");
    const auto m = static_cast<Eigen::Index>(point_count(domain_) / n * SpinorField::kRank);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto* M : {&cl_dt_[i], &B_[i], &C_[i]})
            if (M->rows() != m || M->cols() != m)
                throw DomainMismatch("DiracOperator: slice matrix has the wrong shape");
    }
}

double DiracOperator::self_adjoint_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < slices(); ++i) {
        const auto adj = slice_adjoint(B_[i], slice_point_weights(domain_, i));
        worst = std::max(worst, (B_[i] - adj).norm() / std::max(1.0, B_[i].norm()));
    }
    return worst;
}

double DiracOperator::skew_adjoint_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < slices(); ++i) {
        const auto adj = slice_adjoint(C_[i], slice_point_weights(domain_, i));
        worst = std::max(worst, (C_[i] + adj).norm() / std::max(1.0, C_[i].norm()));
    }
    return worst;
}

double DiracOperator::unitarity_defect() const {
    double worst = 0.0;
    for (const auto& g : cl_dt_)
        worst = std::max(worst, (g.adjoint() * g - SliceMatrix::Identity(g.rows(), g.cols())).norm());
    return worst;
}

double DiracOperator::max_B_norm() const {
    double n = 0.0;
    for (const auto& b : B_) n = std::max(n, Eigen::JacobiSVD<SliceMatrix>(b).singularValues()(0));
    return n;
}

double DiracOperator::max_C_norm() const {
    double n = 0.0;
    for (const auto& c : C_) n = std::max(n, Eigen::JacobiSVD<SliceMatrix>(c).singularValues()(0));
    return n;
}

SliceMatrix slice_adjoint(const SliceMatrix& M, const std::vector<double>& point_weights) {
    const auto w = expand_weights(point_weights);
    if (w.size() != M.rows() || M.rows() != M.cols()) throw DomainMismatch("slice_adjoint: shape mismatch");
    return w.cwiseInverse().asDiagonal() * M.adjoint() * w.asDiagonal();
}

SpinorField normal_derivative(const SpinorField& u) {
    const auto t = slice_coordinates(u.domain());
    const std::size_t n = t.size();
    if (n < 3) throw PreconditionError("normal_derivative needs at least 3 slices for the second-order stencil");
    const double h = t[1] - t[0];
    SpinorField out(u.domain());
    for (std::size_t i = 0; i < n; ++i) {
        auto o = out.slice(i);
        if (i == 0)
            o = (-3.0 * u.slice(0) + 4.0 * u.slice(1) - u.slice(2)) / (2.0 * h);
        else if (i == n - 1)
            o = (3.0 * u.slice(n - 1) - 4.0 * u.slice(n - 2) + u.slice(n - 3)) / (2.0 * h);
        else
            o = (u.slice(i + 1) - u.slice(i - 1)) / (2.0 * h);
    }
    return out;
}

SpinorField dirac_apply(const DiracOperator& op, const SpinorField& u) {
    if (!(u.domain() == op.domain())) throw DomainMismatch("dirac_apply: field and operator live on different grids");
    SpinorField out = normal_derivative(u);
    for (std::size_t i = 0; i < op.slices(); ++i) {
        Eigen::VectorXcd s = out.slice(i) + (op.B(i) + op.C(i)) * u.slice(i);
        out.slice(i) = op.cl_dt(i) * s;
    }
    return out;
}

DiracOperator product_decompose(const Domain& domain, const CliffordFrame& frame, std::vector<SliceMatrix> cl_dt,
                                const std::vector<SliceMatrix>& raw) {
    std::vector<SliceMatrix> B, C;
    B.reserve(raw.size());
    C.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].rows() != raw[i].cols()) throw PreconditionError("product_decompose: non-square slice operator");
        const auto adj = slice_adjoint(raw[i], slice_point_weights(domain, i));
        B.push_back(0.5 * (raw[i] + adj));
        C.push_back(0.5 * (raw[i] - adj));
    }
    return DiracOperator(domain, frame, std::move(cl_dt), std::move(B), std::move(C));
}

DiracOperator absorb_homomorphism(const DiracOperator& op, const std::vector<SliceMatrix>& R) {
    if (R.size() != op.slices()) throw DomainMismatch("absorb_homomorphism: one matrix per slice is required");
    DiracOperator out = op;
    if (out.absorbed_.empty())
        out.absorbed_.assign(op.slices(), SliceMatrix::Zero(static_cast<Eigen::Index>(op.slice_dim()),
                                                            static_cast<Eigen::Index>(op.slice_dim())));
    for (std::size_t i = 0; i < op.slices(); ++i) {
        if (R[i].rows() != op.cl_dt(i).rows() || R[i].cols() != op.cl_dt(i).cols())
            throw DomainMismatch("absorb_homomorphism: shape mismatch");
        const SliceMatrix S = op.cl_dt(i).adjoint() * R[i];
        const auto adj = slice_adjoint(S, slice_point_weights(op.domain(), i));
        out.B_[i] += 0.5 * (S + adj);
        out.C_[i] += 0.5 * (S - adj);
        out.absorbed_[i] += R[i];
    }
    return out;
}

DiracOperator interval_operator(const IntervalDomain& grid, const IntervalModel& model) {
    validate(grid);
    auto frame = CliffordFrame::standard(1);
    std::vector<SliceMatrix> cl(grid.n, frame.generator(0)), raw;
    raw.reserve(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double t = grid.node(i) - grid.t0;
        raw.emplace_back(model.B0 + t * model.B1 + model.C);
    }
    return product_decompose(grid, frame, std::move(cl), raw);
}

Eigen::MatrixXd angular_difference(const AnnulusDomain& grid) {
    const auto m = static_cast<Eigen::Index>(grid.ntheta);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
    const double s = 1.0 / (2.0 * grid.dtheta());
    for (Eigen::Index k = 0; k < m; ++k) {
        D(k, (k + 1) % m) += s;
        D(k, (k + m - 1) % m) -= s;
    }
    return D;
}

DiracOperator annulus_operator(const AnnulusDomain& grid) {
    validate(grid);
    auto frame = CliffordFrame::standard(2);
    const auto Dth = angular_difference(grid);
    const auto m = static_cast<Eigen::Index>(grid.ntheta);
    const Eigen::Index dim = 2 * m;

    std::vector<SliceMatrix> cl(grid.nr), raw(grid.nr);
    for (std::size_t i = 0; i < grid.nr; ++i) {
        const double r = grid.radius(i);
        SliceMatrix c = SliceMatrix::Zero(dim, dim);
        SliceMatrix b = SliceMatrix::Zero(dim, dim);
        for (Eigen::Index k = 0; k < m; ++k) {
            const double th = grid.angle(static_cast<std::size_t>(k));
            const double er[2] = {std::cos(th), std::sin(th)};
            const double et[2] = {-std::sin(th), std::cos(th)};
            const Mat2 clr = frame.covector(er);
            // cl(dr)^{-1} = cl(dr)^* = -cl(dr)
            const Mat2 M = -clr * frame.covector(et) / r;
            c.block<2, 2>(2 * k, 2 * k) = clr;
            for (Eigen::Index j = 0; j < m; ++j)
                if (Dth(k, j) != 0.0) b.block<2, 2>(2 * k, 2 * j) = Dth(k, j) * M;
        }
        cl[i] = std::move(c);
        raw[i] = std::move(b);
    }
    return product_decompose(grid, frame, std::move(cl), raw);
}

}  // namespace ucplab
