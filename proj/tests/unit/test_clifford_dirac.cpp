#include "doctest.h"

#include <cmath>

#include "ucplab/dirac.hpp"
#include "ucplab/rng.hpp"

using namespace ucplab;

namespace {

Vec2 random_vec(CounterRng& rng) {
    Vec2 s;
    s << cplx{rng.normal(), rng.normal()}, cplx{rng.normal(), rng.normal()};
    return s;
}

SliceMatrix random_matrix(CounterRng& rng, Eigen::Index n) {
    SliceMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx{rng.normal(), rng.normal()};
    return m;
}

}  // namespace

TEST_CASE("Clifford relations and skew symmetry for every shipped frame") {
    for (int dim = 1; dim <= 3; ++dim) {
        const auto f = CliffordFrame::standard(dim);
        CHECK(f.clifford_defect() < 1e-14);
        CHECK(f.skew_defect() < 1e-14);
    }
    CHECK_THROWS_AS(CliffordFrame::standard(0), PreconditionError);
    CHECK_THROWS_AS(CliffordFrame::standard(4), PreconditionError);
}

TEST_CASE("cl_apply squares to minus identity and is skew") {
    CounterRng rng(7);
    for (int dim = 1; dim <= 3; ++dim) {
        const auto f = CliffordFrame::standard(dim);
        for (int j = 0; j < dim; ++j) {
            const Vec2 s = random_vec(rng);
            CHECK((f.apply(j, f.apply(j, s)) + s).norm() < 1e-14);
            const cplx lhs = herm(f.apply(j, s), s) + herm(s, f.apply(j, s));
            CHECK(std::abs(lhs) < 1e-13);
        }
        CHECK_THROWS_AS(f.apply(dim, Vec2::Zero()), std::out_of_range);
    }
}

TEST_CASE("dimension 3 generators anticommute by explicit product") {
    const auto f = CliffordFrame::standard(3);
    const cplx i{0.0, 1.0};
    Mat2 g1, g2;
    g1 << 0, i, i, 0;
    g2 << 0, 1, -1, 0;
    CHECK((f.generator(0) - g1).norm() < 1e-15);
    CHECK((f.generator(1) - g2).norm() < 1e-15);
    Mat2 p12, p21;
    p12 << g1(0, 0) * g2(0, 0) + g1(0, 1) * g2(1, 0), g1(0, 0) * g2(0, 1) + g1(0, 1) * g2(1, 1),
        g1(1, 0) * g2(0, 0) + g1(1, 1) * g2(1, 0), g1(1, 0) * g2(0, 1) + g1(1, 1) * g2(1, 1);
    p21 << g2(0, 0) * g1(0, 0) + g2(0, 1) * g1(1, 0), g2(0, 0) * g1(0, 1) + g2(0, 1) * g1(1, 1),
        g2(1, 0) * g1(0, 0) + g2(1, 1) * g1(1, 0), g2(1, 0) * g1(0, 1) + g2(1, 1) * g1(1, 1);
    CHECK((p12 + p21).norm() < 1e-15);
}

TEST_CASE("dirac_apply on the 1D model") {
    const IntervalDomain grid{0.0, 1.0, 101};
    const auto op = interval_operator(grid);
    SpinorField zero(grid);
    CHECK(dirac_apply(op, zero).sup_norm() == 0.0);

    SUBCASE("exponential profile converges at second order") {
        const double lambda = 1.7;
        std::vector<double> err;
        std::vector<double> hs;
        for (std::size_t n : {41u, 81u, 161u, 321u}) {
            const IntervalDomain g{0.0, 1.0, n};
            const auto D = interval_operator(g);
            SpinorField u(g);
            for (std::size_t i = 0; i < n; ++i) u(i, 0) = std::exp(lambda * g.node(i));
            const auto Du = dirac_apply(D, u);
            const Mat2 J = CliffordFrame::standard(1).generator(0);
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                Vec2 exact(lambda * std::exp(lambda * g.node(i)), 0.0);
                e = std::max(e, (Du.at(i) - J * exact).norm());
            }
            err.push_back(e);
            hs.push_back(g.spacing());
        }
        for (std::size_t k = 1; k < err.size(); ++k) {
            const double order = std::log(err[k - 1] / err[k]) / std::log(hs[k - 1] / hs[k]);
            CHECK(order >= 1.9);
        }
    }

    SUBCASE("domain mismatch") {
        SpinorField other(IntervalDomain{0.0, 1.0, 51});
        CHECK_THROWS_AS(dirac_apply(op, other), DomainMismatch);
    }
}

TEST_CASE("product_decompose splits and reassembles") {
    CounterRng rng(11);
    const IntervalDomain grid{0.0, 1.0, 3};
    const auto frame = CliffordFrame::standard(1);
    std::vector<SliceMatrix> cl(3, frame.generator(0));

    std::vector<SliceMatrix> raw;
    for (int i = 0; i < 3; ++i) raw.push_back(random_matrix(rng, 2));
    const auto op = product_decompose(grid, frame, cl, raw);
    for (std::size_t i = 0; i < 3; ++i) CHECK((op.B(i) + op.C(i) - raw[i]).norm() < 1e-14);
    CHECK(op.self_adjoint_defect() < 1e-12);
    CHECK(op.skew_adjoint_defect() < 1e-12);

    std::vector<SliceMatrix> herm_raw, skew_raw;
    for (const auto& m : raw) {
        herm_raw.push_back(m + m.adjoint());
        skew_raw.push_back(m - m.adjoint());
    }
    const auto h = product_decompose(grid, frame, cl, herm_raw);
    const auto s = product_decompose(grid, frame, cl, skew_raw);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(h.C(i).norm() < 1e-14);
        CHECK(s.B(i).norm() < 1e-14);
    }
    raw[1] = SliceMatrix::Zero(2, 3);
    CHECK_THROWS_AS(product_decompose(grid, frame, cl, raw), PreconditionError);
}

TEST_CASE("absorb_homomorphism realizes D + R") {
    CounterRng rng(5);
    const IntervalDomain grid{0.0, 0.5, 33};
    const auto op = interval_operator(grid, {Mat2::Identity(), Mat2::Zero(), Mat2::Zero()});
    std::vector<SliceMatrix> R;
    for (std::size_t i = 0; i < grid.n; ++i) R.push_back(random_matrix(rng, 2));
    const auto absorbed = absorb_homomorphism(op, R);

    SpinorField u(grid);
    for (std::size_t p = 0; p < grid.n; ++p) u.at(p) = random_vec(rng);
    const auto lhs = dirac_apply(absorbed, u);
    auto rhs = dirac_apply(op, u);
    for (std::size_t p = 0; p < grid.n; ++p) rhs.at(p) += R[p] * u.at(p);
    double d = 0.0;
    for (std::size_t p = 0; p < grid.n; ++p) d = std::max(d, (lhs.at(p) - rhs.at(p)).norm());
    CHECK(d < 1e-12);

    std::vector<SliceMatrix> zero(grid.n, SliceMatrix::Zero(2, 2));
    const auto same = absorb_homomorphism(op, zero);
    for (std::size_t i = 0; i < grid.n; ++i) {
        CHECK((same.B(i) - op.B(i)).norm() == 0.0);
        CHECK((same.C(i) - op.C(i)).norm() == 0.0);
    }

    std::vector<SliceMatrix> sym;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const SliceMatrix m = random_matrix(rng, 2);
        const SliceMatrix h = m + m.adjoint();
        sym.push_back(op.cl_dt(i) * h);
    }
    const auto only_b = absorb_homomorphism(op, sym);
    for (std::size_t i = 0; i < grid.n; ++i) CHECK((only_b.C(i) - op.C(i)).norm() < 1e-14);
}

namespace {

// Flat g1 d/dx + g2 d/dy in polar form, assembled point by point from stencils.
Eigen::MatrixXcd dense_annulus(const AnnulusDomain& g) {
    const auto frame = CliffordFrame::standard(2);
    const auto n = static_cast<Eigen::Index>(g.nr * g.ntheta * 2);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    const double h = g.dr(), dth = g.dtheta();
    const auto idx = [&](std::size_t i, std::size_t k) { return static_cast<Eigen::Index>(2 * (i * g.ntheta + k)); };
    for (std::size_t i = 0; i < g.nr; ++i) {
        for (std::size_t k = 0; k < g.ntheta; ++k) {
            const double th = g.angle(k), r = g.radius(i);
            const double er[2] = {std::cos(th), std::sin(th)}, et[2] = {-std::sin(th), std::cos(th)};
            const Mat2 cr = frame.covector(er), ct = frame.covector(et);
            const auto row = idx(i, k);
            if (i == 0) {
                M.block<2, 2>(row, idx(0, k)) += -1.5 / h * cr;
                M.block<2, 2>(row, idx(1, k)) += 2.0 / h * cr;
                M.block<2, 2>(row, idx(2, k)) += -0.5 / h * cr;
            } else if (i == g.nr - 1) {
                M.block<2, 2>(row, idx(i, k)) += 1.5 / h * cr;
                M.block<2, 2>(row, idx(i - 1, k)) += -2.0 / h * cr;
                M.block<2, 2>(row, idx(i - 2, k)) += 0.5 / h * cr;
            } else {
                M.block<2, 2>(row, idx(i + 1, k)) += 0.5 / h * cr;
                M.block<2, 2>(row, idx(i - 1, k)) += -0.5 / h * cr;
            }
            M.block<2, 2>(row, idx(i, (k + 1) % g.ntheta)) += 0.5 / (dth * r) * ct;
            M.block<2, 2>(row, idx(i, (k + g.ntheta - 1) % g.ntheta)) += -0.5 / (dth * r) * ct;
        }
    }
    return M;
}

// Component 0 carries e^{i m theta}, component 1 carries e^{i (m + shift) theta}.
SpinorField angular_mode(const AnnulusDomain& g, int m, double (*radial)(double), const Vec2& s, int shift = 0) {
    SpinorField u(g);
    for (std::size_t i = 0; i < g.nr; ++i)
        for (std::size_t k = 0; k < g.ntheta; ++k) {
            const double f = radial(g.radius(i));
            u(i * g.ntheta + k, 0) = f * std::polar(1.0, m * g.angle(k)) * s(0);
            u(i * g.ntheta + k, 1) = f * std::polar(1.0, (m + shift) * g.angle(k)) * s(1);
        }
    return u;
}

double bump(double r) {
    const double x = (r - 1.0) / 0.5;
    return x <= 0.0 || x >= 1.0 ? 0.0 : std::pow(std::sin(kPi * x), 4);
}

}  // namespace

TEST_CASE("annulus operator matches a dense assembly") {
    const AnnulusDomain g{1.0, 1.5, 9, 12};
    const auto op = annulus_operator(g);
    CHECK(op.self_adjoint_defect() < 1e-12);
    CHECK(op.skew_adjoint_defect() < 1e-12);
    CHECK(op.unitarity_defect() < 1e-14);
    const auto u = angular_mode(g, 3, [](double r) { return r * r; }, Vec2(1.0, cplx{0.0, 0.5}));
    const auto Du = dirac_apply(op, u);
    const auto M = dense_annulus(g);
    Eigen::Map<const Eigen::VectorXcd> x(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
    const Eigen::VectorXcd y = M * x;
    double d = 0.0;
    for (std::size_t k = 0; k < u.values().size(); ++k)
        d = std::max(d, std::abs(y(static_cast<Eigen::Index>(k)) - Du.values()[k]));
    CHECK(d < 1e-10 * std::max(1.0, y.cwiseAbs().maxCoeff()));
}

TEST_CASE("annulus operator has symmetric principal part") {
    // <Du, v> - <u, Dv> stays bounded by a zeroth-order constant as modes sharpen.
    const Vec2 s(1.0, cplx{0.3, -0.2}), t(cplx{0.0, 1.0}, 0.7);
    std::vector<double> defect, pairing;
    for (auto [nr, nth, m] : {std::tuple{33, 64, 3}, std::tuple{65, 128, 6}, std::tuple{129, 256, 12}}) {
        const AnnulusDomain g{1.0, 1.5, static_cast<std::size_t>(nr), static_cast<std::size_t>(nth)};
        const auto op = annulus_operator(g);
        const auto u = angular_mode(g, m, bump, s, 1);
        const auto v = angular_mode(g, m, bump, t, 1);
        const double uv = l2_norm(u) * l2_norm(v);
        defect.push_back(std::abs(l2_inner(dirac_apply(op, u), v) - l2_inner(u, dirac_apply(op, v))) / uv);
        pairing.push_back(std::abs(l2_inner(dirac_apply(op, u), v)) / uv);
    }
    CHECK(pairing.back() > 3.0 * pairing.front());
    for (double d : defect) CHECK(d < 2.0);
    CHECK(defect.back() <= 1.5 * defect.front() + 1e-6);
}
