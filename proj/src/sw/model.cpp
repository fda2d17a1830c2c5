#include "ucplab/sw/model.hpp"

#include <algorithm>
#include <cmath>

#include "ucplab/clifford.hpp"
#include "ucplab/rng.hpp"

namespace ucplab::sw {

namespace {

const double kVol32 = std::pow(2.0 * kPi, 1.5);

ComplexField spinor_component(const SpinorField& psi, std::size_t c) {
    ComplexField f(psi.points());
    for (std::size_t p = 0; p < f.size(); ++p) f[p] = psi(p, c);
    return f;
}

Mat2 b_dot_sigma(const VectorField& b, std::size_t p) {
    Mat2 m;
    m << b[3 * p + 2], cplx{b[3 * p], -b[3 * p + 1]}, cplx{b[3 * p], b[3 * p + 1]}, -b[3 * p + 2];
    return m;
}

Mat2 cl_imaginary(const VectorField& n, std::size_t p) { return -b_dot_sigma(n, p); }

void require_lattice(const SpinorField& psi, int N, const char* what) {
    const auto* d = std::get_if<TorusDomain>(&psi.domain());
    if (!d || d->N != N) throw DomainMismatch(std::string(what) + ": spinor is not on the configuration's lattice");
}

ComplexField low_pass(const Lattice& L, const ComplexField& f, int max_mode) {
    auto c = L.dft(f);
    const std::size_t n = L.side();
    for (std::size_t p = 0; p < L.points(); ++p) {
        const std::size_t m3 = p % n, m2 = (p / n) % n, m1 = p / (n * n);
        if (std::abs(L.wavenumber(m1)) > max_mode || std::abs(L.wavenumber(m2)) > max_mode ||
            std::abs(L.wavenumber(m3)) > max_mode)
            c[p] = 0.0;
    }
    return L.idft(c);
}

/// Divergence-free real 1-forms: e_j / (2 pi)^{3/2} for j < 3, then sqrt 2 trig(k x_d) e_c with d != c.
VectorField basis_form(const Lattice& L, std::size_t j) {
    VectorField m(3 * L.points(), 0.0);
    if (j < 3) {
        for (std::size_t p = 0; p < L.points(); ++p) m[3 * p + j] = 1.0 / kVol32;
        return m;
    }
    const std::size_t r = j - 3;
    const std::size_t comp = r % 3;
    const std::size_t dir = (comp + 1 + (r / 3) % 2) % 3;
    const bool use_sin = (r / 6) % 2 == 1;
    const int k = 1 + static_cast<int>(r / 12) % std::max(1, L.N());
    for (std::size_t p = 0; p < L.points(); ++p) {
        const double x = L.coords(p)[dir];
        m[3 * p + comp] = std::sqrt(2.0) * (use_sin ? std::sin(k * x) : std::cos(k * x)) / kVol32;
    }
    return m;
}

struct EigenMode {
    std::array<int, 3> k;
    Vec2 s;
    double lambda;
};

std::vector<EigenMode> eigen_catalogue() {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    return {
        {{0, 0, 0}, Vec2(1.0, 0.0), 0.0},  {{0, 0, 0}, Vec2(0.0, 1.0), 0.0},  {{1, 0, 0}, Vec2(r, r), -1.0},
        {{1, 0, 0}, Vec2(r, -r), 1.0},     {{0, 1, 0}, Vec2(r, r * i), -1.0}, {{0, 1, 0}, Vec2(r, -r * i), 1.0},
        {{0, 0, 1}, Vec2(1.0, 0.0), -1.0}, {{0, 0, 1}, Vec2(0.0, 1.0), 1.0},
    };
}

cplx spinor_integral_pairing(const Lattice& L, const SpinorField& x, const SpinorField& y) {
    cplx s{};
    for (std::size_t p = 0; p < x.points(); ++p) s += x(p, 0) * std::conj(y(p, 0)) + x(p, 1) * std::conj(y(p, 1));
    return s * L.cell_volume();
}

RealField half_green_div(const Lattice& L, const VectorField& b) {
    auto theta = L.green(L.divergence(b));
    for (auto& v : theta) v *= 0.5;
    return theta;
}

std::vector<double> squared_moduli(const std::vector<cplx>& eta) {
    std::vector<double> s(eta.size());
    for (std::size_t l = 0; l < eta.size(); ++l) s[l] = std::norm(eta[l]);
    return s;
}

}  // namespace

// ---------------------------------------------------------------- configurations

SWConfiguration SWConfiguration::zero(int N) {
    const Lattice L(N);
    return {N, VectorField(3 * L.points(), 0.0), SpinorField(L.domain())};
}

SWConfiguration SWConfiguration::random(int N, double amplitude, std::uint64_t seed, int max_mode) {
    const Lattice L(N);
    auto c = zero(N);
    CounterRng rng(seed, 0);
    for (int j = 0; j < 3; ++j) {
        ComplexField f(L.points());
        for (auto& v : f) v = amplitude * rng.normal();
        if (max_mode >= 0 && max_mode < N) f = low_pass(L, f, max_mode);
        for (std::size_t p = 0; p < L.points(); ++p) c.b[3 * p + static_cast<std::size_t>(j)] = f[p].real();
    }
    for (std::size_t comp = 0; comp < 2; ++comp) {
        ComplexField f(L.points());
        for (auto& v : f) v = amplitude * cplx{rng.normal(), rng.normal()} / std::sqrt(2.0);
        if (max_mode >= 0 && max_mode < N) f = low_pass(L, f, max_mode);
        for (std::size_t p = 0; p < L.points(); ++p) c.psi(p, comp) = f[p];
    }
    return c;
}

void SWConfiguration::check() const {
    const Lattice L(N);
    if (b.size() != 3 * L.points()) throw DomainMismatch("configuration 1-form has the wrong lattice size");
    require_lattice(psi, N, "configuration");
}

Tangent Tangent::zero(int N) {
    const Lattice L(N);
    return {VectorField(3 * L.points(), 0.0), SpinorField(L.domain())};
}

Tangent Tangent::random(int N, double amplitude, std::uint64_t seed) {
    auto c = SWConfiguration::random(N, amplitude, seed);
    return {std::move(c.b), std::move(c.psi)};
}

Tangent& Tangent::axpy(double s, const Tangent& x) {
    if (beta.size() != x.beta.size()) throw DomainMismatch("tangents live on different lattices");
    for (std::size_t k = 0; k < beta.size(); ++k) beta[k] += s * x.beta[k];
    auto out = phi.values();
    auto in = x.phi.values();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += s * in[k];
    return *this;
}

double tangent_dot(const Tangent& x, const Tangent& y) {
    if (x.beta.size() != y.beta.size() || x.phi.values().size() != y.phi.values().size())
        throw DomainMismatch("tangents live on different lattices");
    const auto* d = std::get_if<TorusDomain>(&x.phi.domain());
    if (!d) throw DomainMismatch("tangent spinor is not on a torus lattice");
    const double vol = Lattice(d->N).cell_volume();
    double s = 0.0;
    for (std::size_t k = 0; k < x.beta.size(); ++k) s += x.beta[k] * y.beta[k];
    auto a = x.phi.values();
    auto b = y.phi.values();
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] * std::conj(b[k])).real();
    return s * vol;
}

SWConfiguration displace(const SWConfiguration& c, double s, const Tangent& direction) {
    SWConfiguration out = c;
    Tangent t{out.b, out.psi};
    t.axpy(s, direction);
    out.b = std::move(t.beta);
    out.psi = std::move(t.phi);
    return out;
}

const char* to_string(Case c) {
    switch (c) {
        case Case::unperturbed: return "unperturbed";
        case Case::case1: return "case1";
        case Case::case2: return "case2";
    }
    return "unknown";
}

Case parse_case(const std::string& s) {
    if (s == "unperturbed") return Case::unperturbed;
    if (s == "case1") return Case::case1;
    if (s == "case2") return Case::case2;
    throw PreconditionError("unknown functional case '" + s + "'");
}

// ---------------------------------------------------------------- parameters

double winding_period() { return 2.0 * kVol32; }

PerturbationParams PerturbationParams::flat(int N, std::size_t n_mu, std::size_t n_nu, std::size_t n_eigen) {
    const Lattice L(N);
    const auto catalogue = eigen_catalogue();
    if (n_eigen > catalogue.size()) throw PreconditionError("at most 8 eigenspinors are shipped");
    if (n_mu < 3) throw PreconditionError("the first three mu_j must be the harmonic forms");
    PerturbationParams p;
    for (std::size_t j = 0; j < n_mu; ++j) p.mu.push_back(basis_form(L, j));
    for (std::size_t j = 0; j < n_nu; ++j) p.nu.push_back(basis_form(L, j));
    for (std::size_t l = 0; l < n_eigen; ++l) {
        const auto& e = catalogue[l];
        SpinorField psi(L.domain());
        for (std::size_t q = 0; q < L.points(); ++q) {
            const auto x = L.coords(q);
            const double phase = e.k[0] * x[0] + e.k[1] * x[1] + e.k[2] * x[2];
            psi.at(q) = std::polar(1.0 / kVol32, phase) * e.s;
        }
        p.eigenspinors.push_back(std::move(psi));
        p.eigenvalues.push_back(e.lambda);
        p.eigen_modes.push_back(e.k);
    }
    p.p1 = SmoothFunction::zero(n_mu);
    p.p2 = SmoothFunction::zero(n_nu);
    p.p3 = SmoothFunction::zero(n_eigen);
    for (int k = 0; k <= 16; ++k) p.epsilon.push_back(std::pow(4.0, -k) / std::tgamma(k + 1.0));
    return p;
}

PerturbationParams PerturbationParams::standard(int N) {
    using K = SmoothFunction::Kind;
    auto p = flat(N);
    const double w = 2.0 * kPi / winding_period();
    p.p1 = SmoothFunction(6, {
                                 {0.5, {{0, K::sin, w, 0.0}, {1, K::cos, w, 0.3}}},
                                 {0.3, {{2, K::cos, w, 0.0}}},
                                 {0.4, {{3, K::tanh, 0.8, 0.1}, {4, K::affine, 1.0, 0.5}}},
                                 {0.2, {{5, K::sin, 1.0, 0.0}}},
                             });
    p.p2 = SmoothFunction(3, {
                                 {0.5, {{0, K::tanh, 1.0, 0.0}}},
                                 {0.25, {{1, K::sin, 1.0, 0.2}, {2, K::cos, 1.0, 0.0}}},
                                 {0.1, {{2, K::affine, 1.0, 0.0}}},
                             });
    p.p3 = SmoothFunction(4, {
                                 {0.6, {{0, K::tanh, 1.0, 0.0}}},
                                 {0.3, {{1, K::sin, 1.0, 0.0}, {2, K::tanh, 1.0, 0.1}}},
                                 {0.2, {{3, K::affine, 1.0, 0.0}}},
                             });
    return p;
}

double PerturbationParams::coclosed_defect(int N) const {
    const Lattice L(N);
    double worst = 0.0;
    for (const auto& m : mu)
        for (double v : L.divergence(m)) worst = std::max(worst, std::abs(v));
    return worst;
}

double PerturbationParams::eigen_residual(int N) const {
    const Lattice L(N);
    const VectorField zero(3 * L.points(), 0.0);
    double worst = 0.0;
    for (std::size_t l = 0; l < eigenspinors.size(); ++l) {
        const auto d = dirac3(L, zero, eigenspinors[l]);
        for (std::size_t q = 0; q < L.points(); ++q)
            worst = std::max(worst, (d.at(q) - eigenvalues[l] * eigenspinors[l].at(q)).norm());
    }
    return worst;
}

double PerturbationParams::orthonormality_defect() const {
    double worst = 0.0;
    for (std::size_t l = 0; l < eigenspinors.size(); ++l)
        for (std::size_t m = 0; m < eigenspinors.size(); ++m) {
            const auto* d = std::get_if<TorusDomain>(&eigenspinors[l].domain());
            const cplx ip = spinor_integral_pairing(Lattice(d->N), eigenspinors[l], eigenspinors[m]);
            worst = std::max(worst, std::abs(ip - (l == m ? 1.0 : 0.0)));
        }
    return worst;
}

std::uint64_t PerturbationParams::hash() const {
    std::string text = p1.describe() + "|" + p2.describe() + "|" + p3.describe();
    text += "|mu=" + std::to_string(mu.size()) + "|nu=" + std::to_string(nu.size());
    for (const auto& k : eigen_modes)
        text += "|k=" + std::to_string(k[0]) + "," + std::to_string(k[1]) + "," + std::to_string(k[2]);
    for (double e : eigenvalues) text += "|l=" + std::to_string(e);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ---------------------------------------------------------------- operators

SpinorField dirac3(const Lattice& L, const VectorField& b, const SpinorField& psi) {
    require_lattice(psi, L.N(), "dirac3");
    if (b.size() != 3 * L.points()) throw DomainMismatch("dirac3: 1-form has the wrong lattice size");
    const auto frame = CliffordFrame::standard(3);
    SpinorField out(L.domain());
    const ComplexField c0 = spinor_component(psi, 0), c1 = spinor_component(psi, 1);
    for (int j = 0; j < 3; ++j) {
        const auto d0 = L.derivative(c0, j), d1 = L.derivative(c1, j);
        const Mat2& g = frame.generator(j);
        for (std::size_t p = 0; p < L.points(); ++p) out.at(p) += g * Vec2(d0[p], d1[p]);
    }
    for (std::size_t p = 0; p < L.points(); ++p) out.at(p) -= 0.5 * (b_dot_sigma(b, p) * psi.at(p));
    return out;
}

SpinorField dirac3(const SWConfiguration& c) {
    c.check();
    return dirac3(c.lattice(), c.b, c.psi);
}

VectorField sigma_quadratic(const SpinorField& psi) {
    VectorField s(3 * psi.points());
    for (std::size_t p = 0; p < psi.points(); ++p) {
        const cplx z = std::conj(psi(p, 0)) * psi(p, 1);
        s[3 * p] = 2.0 * z.real();
        s[3 * p + 1] = 2.0 * z.imag();
        s[3 * p + 2] = std::norm(psi(p, 0)) - std::norm(psi(p, 1));
    }
    return s;
}

VectorField sigma_polarized(const SpinorField& psi, const SpinorField& phi) {
    VectorField s(3 * psi.points());
    for (std::size_t p = 0; p < psi.points(); ++p) {
        const Vec2 x = psi.at(p), y = phi.at(p);
        for (int j = 0; j < 3; ++j) s[3 * p + static_cast<std::size_t>(j)] = x.dot(pauli(j) * y).real();
    }
    return s;
}

SwResidual sw_residual(const SWConfiguration& c) {
    c.check();
    const Lattice L = c.lattice();
    const auto curl = L.curl(c.b);
    const auto s = sigma_quadratic(c.psi);
    double r1 = 0.0;
    for (std::size_t k = 0; k < curl.size(); ++k) r1 += std::pow(curl[k] - 0.5 * s[k], 2);
    const auto d = dirac3(L, c.b, c.psi);
    double r2 = 0.0;
    for (const auto& v : d.values()) r2 += std::norm(v);
    return {std::sqrt(r1 * L.cell_volume()), std::sqrt(r2 * L.cell_volume())};
}

Observables observables(const SWConfiguration& c, const PerturbationParams& par) {
    c.check();
    const Lattice L = c.lattice();
    Observables o;
    for (const auto& m : par.mu) {
        double s = 0.0;
        for (std::size_t k = 0; k < m.size(); ++k) s += c.b[k] * m[k];
        o.tau.push_back(-s * L.cell_volume());
    }
    for (const auto& n : par.nu) {
        double s = 0.0;
        for (std::size_t p = 0; p < L.points(); ++p) s += c.psi.at(p).dot(b_dot_sigma(n, p) * c.psi.at(p)).real();
        o.zeta.push_back(-s * L.cell_volume());
    }
    if (!par.eigenspinors.empty()) {
        const auto theta = half_green_div(L, c.b);
        for (const auto& e : par.eigenspinors) {
            cplx s{};
            for (std::size_t p = 0; p < L.points(); ++p) {
                const cplx g = std::polar(1.0, theta[p]);
                s += g * (e(p, 0) * std::conj(c.psi(p, 0)) + e(p, 1) * std::conj(c.psi(p, 1)));
            }
            o.eta.push_back(s * L.cell_volume());
        }
    }
    return o;
}

cplx dirac_energy(const SWConfiguration& c) {
    const Lattice L = c.lattice();
    return spinor_integral_pairing(L, c.psi, dirac3(L, c.b, c.psi));
}

double csd(const SWConfiguration& c, const PerturbationParams& par, Case which) {
    c.check();
    const Lattice L = c.lattice();
    const auto curl = L.curl(c.b);
    double cs = 0.0;
    for (std::size_t k = 0; k < curl.size(); ++k) cs += c.b[k] * curl[k];
    double value = 0.5 * cs * L.cell_volume() + dirac_energy(c).real();
    if (which == Case::unperturbed) return value;
    const auto o = observables(c, par);
    value += par.p1.value(o.tau) + par.p2.value(o.zeta);
    if (which == Case::case2) value += par.p3.value(squared_moduli(o.eta));
    return value;
}

Tangent grad_csd(const SWConfiguration& c, const PerturbationParams& par, Case which) {
    c.check();
    const Lattice L = c.lattice();
    Tangent g;
    g.beta = L.curl(c.b);
    const auto s = sigma_quadratic(c.psi);
    for (std::size_t k = 0; k < s.size(); ++k) g.beta[k] -= 0.5 * s[k];
    g.phi = dirac3(L, c.b, c.psi);
    g.phi *= 2.0;
    if (which == Case::unperturbed) return g;

    const auto o = observables(c, par);
    const auto d1 = par.p1.gradient(o.tau);
    for (std::size_t j = 0; j < par.mu.size(); ++j)
        for (std::size_t k = 0; k < g.beta.size(); ++k) g.beta[k] -= d1[j] * par.mu[j][k];
    const auto d2 = par.p2.gradient(o.zeta);
    for (std::size_t j = 0; j < par.nu.size(); ++j)
        for (std::size_t p = 0; p < L.points(); ++p) g.phi.at(p) += 2.0 * d2[j] * (cl_imaginary(par.nu[j], p) * c.psi.at(p));
    if (which == Case::case1) return g;

    const auto theta = half_green_div(L, c.b);
    const auto d3 = par.p3.gradient(squared_moduli(o.eta));
    RealField im(L.points(), 0.0);
    for (std::size_t l = 0; l < par.eigenspinors.size(); ++l) {
        const auto& e = par.eigenspinors[l];
        const cplx eta_bar = std::conj(o.eta[l]);
        for (std::size_t p = 0; p < L.points(); ++p) {
            const cplx gph = std::polar(1.0, theta[p]);
            const cplx q = gph * (e(p, 0) * std::conj(c.psi(p, 0)) + e(p, 1) * std::conj(c.psi(p, 1)));
            im[p] += d3[l] * (eta_bar * q).imag();
            g.phi.at(p) += (2.0 * d3[l] * eta_bar * gph) * e.at(p);
        }
    }
    const auto grad_g = L.gradient(L.green(im));
    for (std::size_t k = 0; k < g.beta.size(); ++k) g.beta[k] += grad_g[k];
    return g;
}

// ---------------------------------------------------------------- Floer norm

FloerNorm floer_norm(const PerturbationParams& par, const FloerNormOptions& opts) {
    if (opts.k_max < 0 || opts.k_max > 16) throw PreconditionError("floer_norm: derivative orders above 16 are not available");
    if (par.epsilon.size() <= static_cast<std::size_t>(opts.k_max))
        throw PreconditionError("floer_norm: epsilon sequence shorter than k_max + 1");
    auto sample_points = [&](std::size_t dim, std::uint64_t stream) {
        std::vector<std::vector<double>> pts;
        if (dim == 0) return pts;
        if (dim <= 10)
            for (std::size_t mask = 0; mask < (std::size_t{1} << dim); ++mask) {
                std::vector<double> x(dim);
                for (std::size_t j = 0; j < dim; ++j) x[j] = (mask >> j & 1) ? opts.box : -opts.box;
                pts.push_back(std::move(x));
            }
        pts.emplace_back(dim, 0.0);
        CounterRng rng(opts.seed, stream);
        for (std::size_t s = 0; s < opts.samples; ++s) {
            std::vector<double> x(dim);
            for (auto& v : x) v = opts.box * (2.0 * rng.uniform() - 1.0);
            pts.push_back(std::move(x));
        }
        return pts;
    };
    const auto pts1 = sample_points(par.p1.dim(), 1), pts2 = sample_points(par.p2.dim(), 2);
    auto sup = [](const SmoothFunction& f, const std::vector<std::vector<double>>& pts, int k) {
        double s = 0.0;
        if (f.is_zero()) return s;
        for (const auto& x : pts) s = std::max(s, f.tensor_norm(x, k));
        return s;
    };
    FloerNorm out;
    const int last = std::min<int>(static_cast<int>(par.epsilon.size()) - 1, opts.k_max + 4);
    for (int k = 0; k <= last; ++k) {
        const double term = par.epsilon[static_cast<std::size_t>(k)] * (sup(par.p1, pts1, k) + sup(par.p2, pts2, k));
        if (k <= opts.k_max) {
            out.terms.push_back(term);
            out.value += term;
        } else {
            out.remainder_estimate += term;
        }
    }
    return out;
}

// ---------------------------------------------------------------- gauge and bound

SWConfiguration gauge_apply(const SWConfiguration& c, const RealField& f, const std::array<int, 3>& winding) {
    c.check();
    const Lattice L = c.lattice();
    if (f.size() != L.points()) throw DomainMismatch("gauge_apply: gauge function has the wrong lattice size");
    SWConfiguration out = c;
    const auto df = L.gradient(f);
    for (std::size_t p = 0; p < L.points(); ++p) {
        const auto x = L.coords(p);
        for (std::size_t j = 0; j < 3; ++j) out.b[3 * p + j] -= 2.0 * (df[3 * p + j] + winding[j]);
        const double phase = f[p] + winding[0] * x[0] + winding[1] * x[1] + winding[2] * x[2];
        out.psi.at(p) *= std::polar(1.0, phase);
    }
    return out;
}

const char* to_string(BoundVerdict v) {
    switch (v) {
        case BoundVerdict::pass: return "pass";
        case BoundVerdict::fail: return "fail";
        case BoundVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

ScalarBound scalar_bound_check(const SWConfiguration& c, double residual_tol, double tol) {
    ScalarBound out;
    out.residual = sw_residual(c);
    for (std::size_t p = 0; p < c.psi.points(); ++p) out.sup_psi_sq = std::max(out.sup_psi_sq, c.psi.at(p).squaredNorm());
    if (out.residual.curvature >= residual_tol || out.residual.dirac >= residual_tol) return out;
    out.verdict = out.sup_psi_sq <= tol ? BoundVerdict::pass : BoundVerdict::fail;
    return out;
}

}  // namespace ucplab::sw
