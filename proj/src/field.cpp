#include "ucplab/field.hpp"

#include <algorithm>
#include <cmath>

namespace ucplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> trapezoid(std::size_t n, double h) {
    std::vector<double> w(n, h);
    if (n > 0) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

}  // namespace

std::size_t point_count(const Domain& d) {
    return std::visit(overloaded{
                          [](const IntervalDomain& g) { return g.n; },
                          [](const AnnulusDomain& g) { return g.nr * g.ntheta; },
                          [](const TorusDomain& g) { return g.side() * g.side() * g.side(); },
                      },
                      d);
}

void validate(const Domain& d) {
    std::visit(overloaded{
                   [](const IntervalDomain& g) {
                       if (g.n < 2 || !(g.t1 > g.t0)) throw PreconditionError("interval grid needs n >= 2 and t1 > t0");
                   },
                   [](const AnnulusDomain& g) {
                       if (g.nr < 2 || g.ntheta < 3 || !(g.r_inner > 0.0) || !(g.r_outer > g.r_inner))
                           throw PreconditionError("annulus grid needs nr >= 2, ntheta >= 3, 0 < r_inner < r_outer");
                   },
                   [](const TorusDomain& g) {
                       if (g.N < 1) throw PreconditionError("torus lattice needs N >= 1");
                   },
               },
               d);
}

std::vector<double> quadrature_weights(const Domain& d) {
    return std::visit(overloaded{
                          [](const IntervalDomain& g) { return trapezoid(g.n, g.spacing()); },
                          [](const AnnulusDomain& g) {
                              const auto wr = trapezoid(g.nr, g.dr());
                              std::vector<double> w(g.nr * g.ntheta);
                              for (std::size_t i = 0; i < g.nr; ++i)
                                  for (std::size_t k = 0; k < g.ntheta; ++k)
                                      w[i * g.ntheta + k] = wr[i] * g.radius(i) * g.dtheta();
                              return w;
                          },
                          [](const TorusDomain& g) {
                              const double h = 2.0 * kPi / static_cast<double>(g.side());
                              return std::vector<double>(point_count(Domain{g}), h * h * h);
                          },
                      },
                      d);
}

std::vector<double> slice_coordinates(const Domain& d) {
    return std::visit(overloaded{
                          [](const IntervalDomain& g) {
                              std::vector<double> t(g.n);
                              for (std::size_t i = 0; i < g.n; ++i) t[i] = g.node(i) - g.t0;
                              return t;
                          },
                          [](const AnnulusDomain& g) {
                              std::vector<double> t(g.nr);
                              for (std::size_t i = 0; i < g.nr; ++i) t[i] = g.radius(i) - g.r_inner;
                              return t;
                          },
                          [](const TorusDomain&) -> std::vector<double> {
                              throw PreconditionError("torus fields are not sliced");
                          },
                      },
                      d);
}

std::vector<double> slice_point_weights(const Domain& d, std::size_t slice) {
    return std::visit(overloaded{
                          [](const IntervalDomain&) { return std::vector<double>{1.0}; },
                          [slice](const AnnulusDomain& g) {
                              return std::vector<double>(g.ntheta, g.radius(slice) * g.dtheta());
                          },
                          [](const TorusDomain&) -> std::vector<double> {
                              throw PreconditionError("torus fields are not sliced");
                          },
                      },
                      d);
}

std::vector<double> normal_weights(const Domain& d) {
    return std::visit(overloaded{
                          [](const IntervalDomain& g) { return trapezoid(g.n, g.spacing()); },
                          [](const AnnulusDomain& g) { return trapezoid(g.nr, g.dr()); },
                          [](const TorusDomain&) -> std::vector<double> {
                              throw PreconditionError("torus fields are not sliced");
                          },
                      },
                      d);
}

SpinorField::SpinorField(Domain domain) : domain_(domain) {
    validate(domain_);
    values_.assign(point_count(domain_) * kRank, cplx{});
}

SpinorField::SpinorField(Domain domain, std::vector<cplx> values) : domain_(domain), values_(std::move(values)) {
    validate(domain_);
    if (values_.size() != point_count(domain_) * kRank)
        throw DomainMismatch("value array length does not match grid size x fiber rank");
}

std::size_t SpinorField::slices() const {
    if (const auto* g = std::get_if<IntervalDomain>(&domain_)) return g->n;
    if (const auto* g = std::get_if<AnnulusDomain>(&domain_)) return g->nr;
    throw PreconditionError("torus fields are not sliced");
}

std::size_t SpinorField::slice_dim() const { return values_.size() / slices(); }

Eigen::Map<Eigen::VectorXcd> SpinorField::slice(std::size_t i) {
    const auto m = slice_dim();
    return {values_.data() + i * m, static_cast<Eigen::Index>(m)};
}

Eigen::Map<const Eigen::VectorXcd> SpinorField::slice(std::size_t i) const {
    const auto m = slice_dim();
    return {values_.data() + i * m, static_cast<Eigen::Index>(m)};
}

double SpinorField::sup_norm() const {
    double s = 0.0;
    for (std::size_t p = 0; p < points(); ++p) s = std::max(s, point_norm(p));
    return s;
}

SpinorField& SpinorField::operator+=(const SpinorField& other) {
    require_same_domain(*this, other, "field sum");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

SpinorField& SpinorField::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
SpinorField operator*(cplx s, SpinorField a) { return a *= s; }

void require_same_domain(const SpinorField& a, const SpinorField& b, const char* what) {
    if (!(a.domain() == b.domain())) throw DomainMismatch(std::string(what) + ": fields live on different grids");
}

cplx l2_inner(const SpinorField& a, const SpinorField& b) {
    require_same_domain(a, b, "l2_inner");
    const auto w = quadrature_weights(a.domain());
    cplx s{};
    for (std::size_t p = 0; p < a.points(); ++p)
        for (std::size_t c = 0; c < SpinorField::kRank; ++c) s += w[p] * a(p, c) * std::conj(b(p, c));
    return s;
}

double l2_norm(const SpinorField& a) { return std::sqrt(std::max(0.0, l2_inner(a, a).real())); }

}  // namespace ucplab
