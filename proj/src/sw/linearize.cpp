#include "ucplab/sw/linearize.hpp"

#include <cmath>

#include "ucplab/clifford.hpp"
#include "ucplab/rng.hpp"

namespace ucplab::sw {

namespace {

/// (beta.sigma) psi
Vec2 beta_sigma(const VectorField& beta, std::size_t q, const Vec2& psi) {
    Mat2 m;
    m << beta[3 * q + 2], cplx{beta[3 * q], -beta[3 * q + 1]}, cplx{beta[3 * q], beta[3 * q + 1]}, -beta[3 * q + 2];
    return m * psi;
}

SpinorField plane_wave(const Lattice& L, const std::array<int, 3>& k, const Vec2& s) {
    SpinorField w(L.domain());
    for (std::size_t q = 0; q < L.points(); ++q) {
        const auto x = L.coords(q);
        w.at(q) = std::polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) * s;
    }
    return w;
}

}  // namespace

LinearRows LinearRows::zero(int N) {
    const Lattice L(N);
    return {RealField(L.points(), 0.0), VectorField(3 * L.points(), 0.0), SpinorField(L.domain())};
}

LinearRows LinearRows::random(int N, double amplitude, std::uint64_t seed) {
    auto r = zero(N);
    CounterRng rng(seed, 7);
    for (auto& v : r.gauge) v = amplitude * rng.normal();
    for (auto& v : r.curvature) v = amplitude * rng.normal();
    for (auto& v : r.dirac.values()) v = amplitude * cplx{rng.normal(), rng.normal()};
    return r;
}

double rows_dot(const LinearRows& x, const LinearRows& y) {
    if (x.gauge.size() != y.gauge.size()) throw DomainMismatch("rows live on different lattices");
    const auto* d = std::get_if<TorusDomain>(&x.dirac.domain());
    if (!d) throw DomainMismatch("rows are not on a torus lattice");
    double s = 0.0;
    for (std::size_t q = 0; q < x.gauge.size(); ++q) s += x.gauge[q] * y.gauge[q];
    for (std::size_t k = 0; k < x.curvature.size(); ++k) s += x.curvature[k] * y.curvature[k];
    auto a = x.dirac.values();
    auto b = y.dirac.values();
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] * std::conj(b[k])).real();
    return s * Lattice(d->N).cell_volume();
}

Linearization::Linearization(SWConfiguration base) : base_(std::move(base)), lattice_(base_.N) { base_.check(); }

LinearRows Linearization::apply(const Tangent& x) const {
    const Lattice& L = lattice_;
    LinearRows r;
    r.gauge = L.divergence(x.beta);
    for (std::size_t q = 0; q < L.points(); ++q) {
        const cplx z = base_.psi(q, 0) * std::conj(x.phi(q, 0)) + base_.psi(q, 1) * std::conj(x.phi(q, 1));
        r.gauge[q] = -r.gauge[q] + z.imag();
    }
    r.curvature = L.curl(x.beta);
    const auto pol = sigma_polarized(base_.psi, x.phi);
    for (std::size_t k = 0; k < pol.size(); ++k) r.curvature[k] -= pol[k];
    r.dirac = dirac3(L, base_.b, x.phi);
    for (std::size_t q = 0; q < L.points(); ++q) r.dirac.at(q) -= 0.5 * beta_sigma(x.beta, q, base_.psi.at(q));
    return r;
}

Tangent Linearization::adjoint(const LinearRows& y) const {
    const Lattice& L = lattice_;
    Tangent t;
    t.beta = L.gradient(y.gauge);
    const auto cc = L.curl(y.curvature);
    const auto pol = sigma_polarized(y.dirac, base_.psi);
    for (std::size_t k = 0; k < t.beta.size(); ++k) t.beta[k] += cc[k] - 0.5 * pol[k];
    t.phi = dirac3(L, base_.b, y.dirac);
    const cplx I{0.0, 1.0};
    for (std::size_t q = 0; q < L.points(); ++q) {
        const Vec2 psi = base_.psi.at(q);
        t.phi.at(q) -= I * y.gauge[q] * psi;
        t.phi.at(q) -= beta_sigma(y.curvature, q, psi);
    }
    return t;
}

Mat2 Linearization::dirac_symbol(const std::array<int, 3>& k, bool adjoint) const {
    const Lattice& L = lattice_;
    Mat2 symbol = Mat2::Zero();
    const std::size_t probe = 0;  // evaluate at the origin, where the plane-wave phase is 1
    for (int col = 0; col < 2; ++col) {
        Vec2 s = Vec2::Zero();
        s(col) = 1.0;
        auto response = [&](const std::array<int, 3>& kk) {
            const auto w = plane_wave(L, kk, s);
            if (!adjoint) return apply(Tangent{VectorField(3 * L.points(), 0.0), w}).dirac;
            LinearRows y = LinearRows::zero(base_.N);
            y.dirac = w;
            return this->adjoint(y).phi;
        };
        const Vec2 v = response(k).at(probe) - response({0, 0, 0}).at(probe);
        symbol.col(col) = v;
    }
    return symbol;
}

LinearRows monopole_map(const SWConfiguration& c) {
    c.check();
    const Lattice L = c.lattice();
    LinearRows r;
    r.gauge = RealField(L.points(), 0.0);
    r.curvature = L.curl(c.b);
    const auto s = sigma_quadratic(c.psi);
    for (std::size_t k = 0; k < s.size(); ++k) r.curvature[k] -= 0.5 * s[k];
    r.dirac = dirac3(L, c.b, c.psi);
    return r;
}

SpinorBlockSetup linearization_ucp_setup(const SWConfiguration& c, const PerturbationParams& p, const Tangent& direction) {
    c.check();
    const Lattice L = c.lattice();
    if (direction.beta.size() != c.b.size()) throw DomainMismatch("direction lives on a different lattice");
    SpinorBlockSetup out{Perturbation::zero(L.domain()), 0.0, 0.0, false, {}, Perturbation::zero(L.domain()), 0.0, 0.0, {}, {}};

    SpinorField source(L.domain());
    double sup_alpha = 0.0, sup_psi = 0.0;
    for (std::size_t q = 0; q < L.points(); ++q) {
        source.at(q) = -0.5 * beta_sigma(direction.beta, q, c.psi.at(q));
        sup_alpha = std::max(sup_alpha, std::hypot(direction.beta[3 * q], direction.beta[3 * q + 1], direction.beta[3 * q + 2]));
        sup_psi = std::max(sup_psi, c.psi.at(q).norm());
    }
    out.coupling_sup = source.sup_norm();
    out.coupling_witness = 0.5 * sup_alpha * sup_psi;
    if (out.coupling_sup > 0.0) {
        out.coupling = Perturbation::inhomogeneous(std::move(source));
        out.coupling_note = "not admissible in phi alone: the term does not vanish where phi does";
    } else {
        out.coupling_admissible = true;
    }

    const auto o = observables(c, p);
    const auto d2 = p.p2.gradient(o.zeta);
    std::vector<Mat2> M(L.points(), Mat2::Zero());
    for (std::size_t j = 0; j < p.nu.size(); ++j) {
        double sup_n = 0.0;
        for (std::size_t q = 0; q < L.points(); ++q) {
            const auto& n = p.nu[j];
            Mat2 cl;
            cl << n[3 * q + 2], cplx{n[3 * q], -n[3 * q + 1]}, cplx{n[3 * q], n[3 * q + 1]}, -n[3 * q + 2];
            M[q] -= d2[j] * cl;  // cl(i n) = -n.sigma
            sup_n = std::max(sup_n, std::hypot(n[3 * q], n[3 * q + 1], n[3 * q + 2]));
        }
        out.case1_C0 += std::abs(d2[j]) * sup_n;
    }
    out.case1 = Perturbation::pointwise_linear(L.domain(), std::move(M));
    out.case1_C0_sharp = out.case1.coefficient_sup();

    if (!p.eigenspinors.empty()) {
        RealField theta = L.green(L.divergence(c.b));
        for (auto& v : theta) v *= 0.5;
        const auto d3 = p.p3.gradient([&] {
            std::vector<double> s;
            for (const auto& e : o.eta) s.push_back(std::norm(e));
            return s;
        }());
        for (std::size_t l = 0; l < p.eigenspinors.size(); ++l) {
            SpinorField w(L.domain());
            const double scale = std::sqrt(std::abs(d3[l]));
            for (std::size_t q = 0; q < L.points(); ++q) w.at(q) = (scale * std::polar(1.0, theta[q])) * p.eigenspinors[l].at(q);
            out.case2.push_back(Perturbation::rank_one(std::move(w)));
            out.case2_signs.push_back(d3[l] < 0.0 ? -1.0 : 1.0);
        }
    }
    return out;
}

}  // namespace ucplab::sw
