#include "ucplab/sw/lattice.hpp"

#include <cmath>

namespace ucplab::sw {

Lattice::Lattice(int N) : N_(N), n_(static_cast<std::size_t>(2 * N + 1)) {
    if (N < 1) throw PreconditionError("lattice needs N >= 1");
    const auto n = static_cast<Eigen::Index>(n_);
    D_ = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < n; ++l)
            if (j != l) {
                const auto d = j - l;
                const double sign = (d % 2 == 0) ? 1.0 : -1.0;
                D_(j, l) = 0.5 * sign / std::sin(kPi * static_cast<double>(d) / static_cast<double>(n));
            }
    F_.resize(n, n);
    Finv_.resize(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double k = wavenumber(static_cast<std::size_t>(m));
            const double x = spacing() * static_cast<double>(j);
            F_(m, j) = std::polar(1.0, -k * x);
            Finv_(j, m) = std::polar(1.0 / static_cast<double>(n), k * x);
        }
}

std::array<double, 3> Lattice::coords(std::size_t p) const {
    const std::size_t i3 = p % n_, i2 = (p / n_) % n_, i1 = p / (n_ * n_);
    const double h = spacing();
    return {h * static_cast<double>(i1), h * static_cast<double>(i2), h * static_cast<double>(i3)};
}

template <class T, class M>
std::vector<T> Lattice::along_axis(const M& mat, const std::vector<T>& f, int axis) const {
    if (f.size() != points()) throw DomainMismatch("lattice field has the wrong number of points");
    if (axis < 0 || axis > 2) throw std::out_of_range("axis must be 0, 1 or 2");
    using Scalar = std::conditional_t<std::is_same_v<T, double> && std::is_same_v<typename M::Scalar, double>, double, cplx>;
    static_assert(std::is_same_v<Scalar, T>, "real fields need real matrices");
    const std::size_t stride = axis == 0 ? n_ * n_ : (axis == 1 ? n_ : 1);
    std::vector<T> out(points());
    Eigen::Matrix<T, Eigen::Dynamic, 1> line(static_cast<Eigen::Index>(n_)), res;
    for (std::size_t p = 0; p < points(); ++p) {
        const std::size_t pos = (p / stride) % n_;
        if (pos != 0) continue;
        for (std::size_t m = 0; m < n_; ++m) line(static_cast<Eigen::Index>(m)) = f[p + m * stride];
        res = mat.template cast<T>() * line;
        for (std::size_t m = 0; m < n_; ++m) out[p + m * stride] = res(static_cast<Eigen::Index>(m));
    }
    return out;
}

RealField Lattice::derivative(const RealField& f, int axis) const { return along_axis(D_, f, axis); }
ComplexField Lattice::derivative(const ComplexField& f, int axis) const { return along_axis(D_, f, axis); }

VectorField Lattice::gradient(const RealField& f) const {
    VectorField g(3 * points());
    for (int j = 0; j < 3; ++j) set_component(g, j, derivative(f, j));
    return g;
}

RealField Lattice::divergence(const VectorField& b) const {
    RealField d(points(), 0.0);
    for (int j = 0; j < 3; ++j) {
        const auto dj = derivative(component(b, j), j);
        for (std::size_t p = 0; p < points(); ++p) d[p] += dj[p];
    }
    return d;
}

VectorField Lattice::curl(const VectorField& b) const {
    const RealField b1 = component(b, 0), b2 = component(b, 1), b3 = component(b, 2);
    const auto d2b3 = derivative(b3, 1), d3b2 = derivative(b2, 2);
    const auto d3b1 = derivative(b1, 2), d1b3 = derivative(b3, 0);
    const auto d1b2 = derivative(b2, 0), d2b1 = derivative(b1, 1);
    VectorField c(3 * points());
    for (std::size_t p = 0; p < points(); ++p) {
        c[3 * p] = d2b3[p] - d3b2[p];
        c[3 * p + 1] = d3b1[p] - d1b3[p];
        c[3 * p + 2] = d1b2[p] - d2b1[p];
    }
    return c;
}

ComplexField Lattice::dft(const ComplexField& f) const {
    return along_axis(F_, along_axis(F_, along_axis(F_, f, 0), 1), 2);
}

ComplexField Lattice::idft(const ComplexField& f) const {
    return along_axis(Finv_, along_axis(Finv_, along_axis(Finv_, f, 0), 1), 2);
}

RealField Lattice::green(const RealField& f) const {
    ComplexField c(f.begin(), f.end());
    c = dft(c);
    for (std::size_t p = 0; p < points(); ++p) {
        const std::size_t m3 = p % n_, m2 = (p / n_) % n_, m1 = p / (n_ * n_);
        const double k1 = wavenumber(m1), k2 = wavenumber(m2), k3 = wavenumber(m3);
        const double k2sum = k1 * k1 + k2 * k2 + k3 * k3;
        c[p] = k2sum == 0.0 ? cplx{} : c[p] / k2sum;
    }
    c = idft(c);
    RealField out(points());
    for (std::size_t p = 0; p < points(); ++p) out[p] = c[p].real();
    return out;
}

double Lattice::integrate(const RealField& f) const {
    double s = 0.0;
    for (double v : f) s += v;
    return s * cell_volume();
}

RealField component(const VectorField& b, int j) {
    RealField f(b.size() / 3);
    for (std::size_t p = 0; p < f.size(); ++p) f[p] = b[3 * p + static_cast<std::size_t>(j)];
    return f;
}

void set_component(VectorField& b, int j, const RealField& f) {
    for (std::size_t p = 0; p < f.size(); ++p) b[3 * p + static_cast<std::size_t>(j)] = f[p];
}

}  // namespace ucplab::sw
