#include <doctest.h>

#include <cmath>

#include "ucplab/clifford.hpp"
#include "ucplab/sw/model.hpp"

using namespace ucplab;
using namespace ucplab::sw;

namespace {

const double kVol32 = std::pow(2.0 * kPi, 1.5);

double fd_gradient_error(const SWConfiguration& c, const PerturbationParams& p, Case which, const Tangent& d, double h) {
    const double fd = (csd(displace(c, h, d), p, which) - csd(displace(c, -h, d), p, which)) / (2.0 * h);
    return std::abs(fd - tangent_dot(grad_csd(c, p, which), d));
}


/// Derivatives by explicit Fourier sums over all lattice modes.
struct DenseFourier {
    const Lattice& L;

    ComplexField derivative(const ComplexField& f, int axis) const {
        const std::size_t P = L.points(), n = L.side();
        std::vector<std::array<int, 3>> modes;
        for (std::size_t q = 0; q < P; ++q)
            modes.push_back({L.wavenumber(q / (n * n)), L.wavenumber((q / n) % n), L.wavenumber(q % n)});
        std::vector<cplx> fh(P);
        for (std::size_t m = 0; m < P; ++m) {
            cplx s{};
            for (std::size_t y = 0; y < P; ++y) s += f[y] * std::polar(1.0, -phase(modes[m], y));
            fh[m] = s / static_cast<double>(P);
        }
        ComplexField out(P);
        for (std::size_t x = 0; x < P; ++x) {
            cplx s{};
            for (std::size_t m = 0; m < P; ++m)
                s += cplx{0.0, static_cast<double>(modes[m][static_cast<std::size_t>(axis)])} * fh[m] *
                     std::polar(1.0, phase(modes[m], x));
            out[x] = s;
        }
        return out;
    }

    double phase(const std::array<int, 3>& k, std::size_t q) const {
        const auto x = L.coords(q);
        return k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
    }
};

struct DenseEvaluation {
    VectorField curl;
    SpinorField dirac;
};

DenseEvaluation dense_evaluate(const Lattice& L, const SWConfiguration& c) {
    const DenseFourier F{L};
    std::array<std::array<ComplexField, 3>, 3> db;  // db[i][j] = d_j b_i
    for (int i = 0; i < 3; ++i) {
        ComplexField bi(L.points());
        for (std::size_t q = 0; q < L.points(); ++q) bi[q] = c.b[3 * q + static_cast<std::size_t>(i)];
        for (int j = 0; j < 3; ++j) db[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = F.derivative(bi, j);
    }
    std::array<std::array<ComplexField, 3>, 2> dpsi;
    for (std::size_t s = 0; s < 2; ++s) {
        ComplexField f(L.points());
        for (std::size_t q = 0; q < L.points(); ++q) f[q] = c.psi(q, s);
        for (int j = 0; j < 3; ++j) dpsi[s][static_cast<std::size_t>(j)] = F.derivative(f, j);
    }
    DenseEvaluation out{VectorField(3 * L.points()), SpinorField(L.domain())};
    const cplx I{0.0, 1.0};
    for (std::size_t q = 0; q < L.points(); ++q) {
        out.curl[3 * q] = (db[2][1][q] - db[1][2][q]).real();
        out.curl[3 * q + 1] = (db[0][2][q] - db[2][0][q]).real();
        out.curl[3 * q + 2] = (db[1][0][q] - db[0][1][q]).real();
        Vec2 v = Vec2::Zero();
        for (std::size_t j = 0; j < 3; ++j) {
            v += I * (pauli(static_cast<int>(j)) * Vec2(dpsi[0][j][q], dpsi[1][j][q]));
            v -= 0.5 * c.b[3 * q + j] * (pauli(static_cast<int>(j)) * c.psi.at(q));
        }
        out.dirac.at(q) = v;
    }
    return out;
}

/// Mixed partial by a tensor product of central-difference stencils.
double fd_partial(const SmoothFunction& f, std::vector<double> x, const std::vector<int>& alpha, double h,
                  std::size_t var = 0) {
    while (var < alpha.size() && alpha[var] == 0) ++var;
    if (var == alpha.size()) return f.value(x);
    static const std::vector<std::vector<std::pair<int, double>>> stencils = {
        {},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
    };
    const int order = alpha[var];
    double s = 0.0;
    const double x0 = x[var];
    for (const auto& [offset, w] : stencils[static_cast<std::size_t>(order)]) {
        x[var] = x0 + offset * h;
        s += w * fd_partial(f, x, alpha, h, var + 1);
    }
    return s / std::pow(h, order);
}

double fd_tensor_norm(const SmoothFunction& f, const std::vector<double>& x, int order, double h) {
    // multinomial-weighted Frobenius norm over multi-indices of the given order
    double s = 0.0;
    std::vector<int> alpha(f.dim(), 0);
    auto rec = [&](auto&& self, std::size_t var, int left) -> void {
        if (var + 1 == alpha.size()) {
            alpha[var] = left;
            double mult = std::tgamma(order + 1.0);
            for (int a : alpha) mult /= std::tgamma(a + 1.0);
            s += mult * std::pow(fd_partial(f, x, alpha, h), 2);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            alpha[var] = a;
            self(self, var + 1, left - a);
        }
    };
    rec(rec, 0, order);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("plane-wave eigenspinors are orthonormal eigenvectors of the flat Dirac operator") {
    for (int N : {2, 3}) {
        const auto p = PerturbationParams::flat(N, 6, 3, 8);
        CHECK(p.eigen_residual(N) < 1e-12);
        CHECK(p.orthonormality_defect() < 1e-12);
        CHECK(p.coclosed_defect(N) < 1e-12);
    }
}

TEST_CASE("twisted Dirac operator is symmetric for the L2 pairing") {
    const int N = 3;
    const Lattice L(N);
    const auto c = SWConfiguration::random(N, 0.5, 11);
    const auto other = SWConfiguration::random(N, 0.5, 12);
    const auto d1 = dirac3(L, c.b, c.psi), d2 = dirac3(L, c.b, other.psi);
    cplx lhs{}, rhs{};
    for (std::size_t q = 0; q < L.points(); ++q) {
        lhs += d1.at(q).dot(other.psi.at(q));
        rhs += c.psi.at(q).dot(d2.at(q));
    }
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
}

TEST_CASE("sigma quadratic matches the polarized form and explicit Pauli products") {
    const auto c = SWConfiguration::random(2, 1.0, 5);
    const auto s = sigma_quadratic(c.psi), pol = sigma_polarized(c.psi, c.psi);
    for (std::size_t q = 0; q < c.psi.points(); ++q)
        for (int j = 0; j < 3; ++j) {
            const double direct = c.psi.at(q).dot(pauli(j) * c.psi.at(q)).real();
            CHECK(s[3 * q + static_cast<std::size_t>(j)] == doctest::Approx(direct).epsilon(1e-13));
            CHECK(pol[3 * q + static_cast<std::size_t>(j)] == doctest::Approx(direct).epsilon(1e-13));
        }
}

TEST_CASE("Chern-Simons-Dirac on a Beltrami field and an eigenspinor") {
    const int N = 3;
    const Lattice L(N);
    const auto p = PerturbationParams::flat(N, 6, 3, 4);
    auto c = SWConfiguration::zero(N);
    for (std::size_t q = 0; q < L.points(); ++q) {
        const double x3 = L.coords(q)[2];
        c.b[3 * q] = std::sin(x3);
        c.b[3 * q + 1] = std::cos(x3);
    }
    // curl b = b, so the Chern-Simons part is |b|^2 / 2 integrated
    CHECK(csd(c, p, Case::unperturbed) == doctest::Approx(0.5 * std::pow(2.0 * kPi, 3)).epsilon(1e-12));

    auto e = SWConfiguration::zero(N);
    e.psi = p.eigenspinors[2];
    CHECK(dirac_energy(e).real() == doctest::Approx(p.eigenvalues[2]).epsilon(1e-12));
    CHECK(std::abs(dirac_energy(e).imag()) < 1e-12);
}

TEST_CASE("observables on closed-form configurations") {
    const int N = 2;
    const Lattice L(N);
    const auto p = PerturbationParams::flat(N, 6, 3, 4);
    auto c = SWConfiguration::zero(N);
    for (std::size_t q = 0; q < L.points(); ++q) c.b[3 * q] = 1.0;
    c.psi = p.eigenspinors[3];
    const auto o = observables(c, p);
    // tau_1 = - int b_1 m_1 = -(2 pi)^3 / (2 pi)^{3/2}
    CHECK(o.tau[0] == doctest::Approx(-kVol32).epsilon(1e-12));
    CHECK(std::abs(o.tau[1]) < 1e-12);
    CHECK(std::abs(o.tau[3]) < 1e-12);
    // constant b has zero divergence, so eta is the plain L2 pairing
    for (std::size_t l = 0; l < 4; ++l) CHECK(std::abs(o.eta[l] - (l == 3 ? 1.0 : 0.0)) < 1e-12);
    // zeta_j = - int psi^* sigma_j psi / (2 pi)^{3/2} with psi = (1, -1) e^{i x1} / sqrt 2 (2 pi)^{3/2}
    CHECK(o.zeta[0] == doctest::Approx(1.0 / kVol32).epsilon(1e-12));
    CHECK(std::abs(o.zeta[1]) < 1e-12);
    CHECK(std::abs(o.zeta[2]) < 1e-12);
}

TEST_CASE("gradient of the functional matches central differences") {
    const int N = 4;
    const auto p = PerturbationParams::standard(N);
    for (Case which : {Case::unperturbed, Case::case1, Case::case2}) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto c = SWConfiguration::random(N, 0.3, seed, 2);
            const auto d = Tangent::random(N, 0.3, 100 + seed);
            const double e1 = fd_gradient_error(c, p, which, d, 1e-2);
            const double e2 = fd_gradient_error(c, p, which, d, 1e-3);
            const double e3 = fd_gradient_error(c, p, which, d, 1e-4);
            INFO(std::string(to_string(which)), " seed ", seed, " errors ", e1, " ", e2, " ", e3);
            CHECK(std::log10(e1 / e2) >= 1.9);
            CHECK(std::log10(e2 / e3) >= 1.9);
        }
    }
}

TEST_CASE("harmonic perturbation term shifts the connection gradient by -p1' m_1") {
    const int N = 2;
    auto p = PerturbationParams::flat(N);
    const auto c = SWConfiguration::random(N, 0.4, 9);
    const auto g0 = grad_csd(c, p, Case::case1);
    p.p1 = SmoothFunction::coordinate(p.p1.dim(), 0, 1.0);
    const auto g1 = grad_csd(c, p, Case::case1);
    double worst = 0.0;
    for (std::size_t k = 0; k < g0.beta.size(); ++k) worst = std::max(worst, std::abs(g1.beta[k] - g0.beta[k] + p.mu[0][k]));
    CHECK(worst < 1e-14);
}

TEST_CASE("gauge behaviour of observables and the functional") {
    const int N = 4;
    const Lattice L(N);
    const auto p = PerturbationParams::standard(N);
    const auto c = SWConfiguration::random(N, 0.3, 21, 1);
    RealField f(L.points());
    for (std::size_t q = 0; q < L.points(); ++q) {
        const auto x = L.coords(q);
        f[q] = 0.05 * std::sin(x[0]) + 0.03 * std::cos(x[1] + x[2]);
    }
    const auto o = observables(c, p);

    SUBCASE("null-homotopic gauge") {
        const auto g = gauge_apply(c, f, {0, 0, 0});
        const auto og = observables(g, p);
        for (std::size_t j = 0; j < o.zeta.size(); ++j) CHECK(std::abs(og.zeta[j] - o.zeta[j]) < 1e-10);
        for (std::size_t j = 0; j < o.tau.size(); ++j) CHECK(std::abs(og.tau[j] - o.tau[j]) < 1e-10);
        for (std::size_t l = 0; l < o.eta.size(); ++l) CHECK(std::abs(og.eta[l] - o.eta[l]) < 1e-8);
        for (Case which : {Case::unperturbed, Case::case1, Case::case2})
            CHECK(std::abs(csd(g, p, which) - csd(c, p, which)) < 1e-10);
    }
    SUBCASE("winding gauge shifts tau_j by the period") {
        for (int j = 0; j < 3; ++j) {
            std::array<int, 3> w{0, 0, 0};
            w[static_cast<std::size_t>(j)] = 1;
            const auto og = observables(gauge_apply(c, RealField(L.points(), 0.0), w), p);
            for (std::size_t k = 0; k < o.tau.size(); ++k) {
                const double shift = k == static_cast<std::size_t>(j) ? winding_period() : 0.0;
                CHECK(std::abs(og.tau[k] - o.tau[k] - shift) < 1e-8);
            }
            for (std::size_t k = 0; k < o.zeta.size(); ++k) CHECK(std::abs(og.zeta[k] - o.zeta[k]) < 1e-10);
        }
    }
}

TEST_CASE("Floer norm of a linear perturbation") {
    auto p = PerturbationParams::flat(2);
    p.p1 = SmoothFunction::coordinate(p.p1.dim(), 0, 0.7);
    FloerNormOptions opts;
    opts.box = 1.5;
    const auto n = floer_norm(p, opts);
    CHECK(n.terms.size() == 7);
    CHECK(n.value == doctest::Approx(p.epsilon[0] * 0.7 * 1.5 + p.epsilon[1] * 0.7).epsilon(1e-14));
    CHECK(n.remainder_estimate == 0.0);

    opts.k_max = 17;
    CHECK_THROWS_AS(floer_norm(p, opts), PreconditionError);
}

TEST_CASE("Floer norm terms of the standard perturbation decay") {
    const auto p = PerturbationParams::standard(2);
    const auto n = floer_norm(p);
    REQUIRE(n.terms.size() == 7);
    CHECK(std::isfinite(n.value));
    CHECK(n.remainder_estimate < n.terms.back());
}

TEST_CASE("scalar bound verdicts") {
    const auto zero = SWConfiguration::zero(2);
    CHECK(scalar_bound_check(zero).verdict == BoundVerdict::pass);
    const auto rnd = SWConfiguration::random(2, 0.5, 3);
    CHECK(scalar_bound_check(rnd).verdict == BoundVerdict::inconclusive);
}

TEST_CASE("parameter hash and case parsing") {
    CHECK(PerturbationParams::standard(2).hash() == PerturbationParams::standard(2).hash());
    CHECK(PerturbationParams::standard(2).hash() != PerturbationParams::flat(2).hash());
    CHECK(parse_case("case2") == Case::case2);
    CHECK_THROWS_AS(parse_case("case3"), PreconditionError);
}

TEST_CASE("residual and functional agree with a dense Fourier-sum evaluation") {
    const int N = 2;
    const Lattice L(N);
    const auto p = PerturbationParams::standard(N);
    const auto c = SWConfiguration::random(N, 0.6, 31);
    const auto dense = dense_evaluate(L, c);

    double r1 = 0.0, r2 = 0.0, cs = 0.0, de = 0.0;
    for (std::size_t q = 0; q < L.points(); ++q) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double sq = c.psi.at(q).dot(pauli(static_cast<int>(j)) * c.psi.at(q)).real();
            r1 += std::pow(dense.curl[3 * q + j] - 0.5 * sq, 2);
            cs += c.b[3 * q + j] * dense.curl[3 * q + j];
        }
        r2 += dense.dirac.at(q).squaredNorm();
        de += c.psi.at(q).dot(dense.dirac.at(q)).real();
    }
    const double vol = L.cell_volume();
    const auto r = sw_residual(c);
    CHECK(r.curvature == doctest::Approx(std::sqrt(r1 * vol)).epsilon(1e-11));
    CHECK(r.dirac == doctest::Approx(std::sqrt(r2 * vol)).epsilon(1e-11));
    const double unperturbed = 0.5 * cs * vol + de * vol;
    CHECK(csd(c, p, Case::unperturbed) == doctest::Approx(unperturbed).epsilon(1e-11));
    CHECK(std::abs(dirac_energy(c).imag()) < 1e-10);

    // observables by direct quadrature
    std::vector<double> tau, zeta;
    for (const auto& m : p.mu) {
        double t = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) t -= c.b[k] * m[k] * vol;
        tau.push_back(t);
    }
    for (const auto& n : p.nu) {
        cplx z{};
        for (std::size_t q = 0; q < L.points(); ++q) {
            Mat2 ns = Mat2::Zero();
            for (int j = 0; j < 3; ++j) ns += n[3 * q + static_cast<std::size_t>(j)] * pauli(j);
            z -= c.psi.at(q).dot(ns * c.psi.at(q)) * vol;
        }
        CHECK(std::abs(z.imag()) < 1e-12);
        zeta.push_back(z.real());
    }
    CHECK(csd(c, p, Case::case1) == doctest::Approx(unperturbed + p.p1.value(tau) + p.p2.value(zeta)).epsilon(1e-11));
}

TEST_CASE("Floer norm matches finite-difference derivative suprema") {
    using K = SmoothFunction::Kind;
    auto p = PerturbationParams::flat(2, 3, 2, 0);
    p.p1 = SmoothFunction(3, {{0.8, {{0, K::tanh, 1.3, 0.2}, {1, K::tanh, 0.7, -0.1}}}, {0.5, {{2, K::tanh, 2.0, 0.0}}}});
    p.p2 = SmoothFunction(2, {{0.3, {{0, K::tanh, 1.0, 0.4}, {1, K::sin, 1.0, 0.0}}}});
    FloerNormOptions opts;
    opts.k_max = 3;
    opts.samples = 0;
    opts.box = 0.8;
    const auto n = floer_norm(p, opts);

    auto corners = [&](std::size_t dim) {
        std::vector<std::vector<double>> pts;
        for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j) x[j] = (mask >> j & 1) ? opts.box : -opts.box;
            pts.push_back(x);
        }
        pts.emplace_back(dim, 0.0);
        return pts;
    };
    double expected = 0.0;
    for (int k = 0; k <= 3; ++k) {
        double s1 = 0.0, s2 = 0.0;
        for (const auto& x : corners(3)) s1 = std::max(s1, fd_tensor_norm(p.p1, x, k, 1e-3));
        for (const auto& x : corners(2)) s2 = std::max(s2, fd_tensor_norm(p.p2, x, k, 1e-3));
        CHECK(n.terms[static_cast<std::size_t>(k)] == doctest::Approx(p.epsilon[static_cast<std::size_t>(k)] * (s1 + s2)).epsilon(1e-5));
        expected += p.epsilon[static_cast<std::size_t>(k)] * (s1 + s2);
    }
    CHECK(n.value == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("zeta is real and eta vanishes at the origin") {
    const auto p = PerturbationParams::standard(2);
    const auto o = observables(SWConfiguration::zero(2), p);
    for (double t : o.tau) CHECK(t == 0.0);
    for (double z : o.zeta) CHECK(z == 0.0);
    for (const auto& e : o.eta) CHECK(std::abs(e) == 0.0);
    CHECK(floer_norm(PerturbationParams::flat(2)).value == 0.0);
}
