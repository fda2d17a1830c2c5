#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "ucplab/common.hpp"
#include "ucplab/field.hpp"

namespace ucplab::sw {

using RealField = std::vector<double>;  ///< one value per lattice point
using ComplexField = std::vector<cplx>;
using VectorField = std::vector<double>;  ///< three real components per point, components innermost

/// Periodic (2N+1)^3 grid on [0, 2 pi)^3 with Fourier differentiation.
///
/// Points are stored row-major over (i1, i2, i3). Derivatives are exact for
/// trigonometric polynomials with |k_j| <= N.
class Lattice {
public:
    explicit Lattice(int N);
    explicit Lattice(const TorusDomain& d) : Lattice(d.N) {}

    int N() const { return N_; }
    std::size_t side() const { return n_; }
    std::size_t points() const { return n_ * n_ * n_; }
    double spacing() const { return 2.0 * kPi / static_cast<double>(n_); }
    double cell_volume() const { return spacing() * spacing() * spacing(); }
    TorusDomain domain() const { return TorusDomain{N_}; }

    std::size_t index(std::size_t i1, std::size_t i2, std::size_t i3) const { return (i1 * n_ + i2) * n_ + i3; }
    std::array<double, 3> coords(std::size_t p) const;
    /// Signed wavenumber of DFT slot m: 0..N, then -N..-1.
    int wavenumber(std::size_t m) const { return m <= static_cast<std::size_t>(N_) ? static_cast<int>(m) : static_cast<int>(m) - static_cast<int>(n_); }

    /// Spectral first-derivative matrix (real, skew-symmetric).
    const Eigen::MatrixXd& diff() const { return D_; }

    RealField derivative(const RealField& f, int axis) const;
    ComplexField derivative(const ComplexField& f, int axis) const;

    VectorField gradient(const RealField& f) const;
    RealField divergence(const VectorField& b) const;
    VectorField curl(const VectorField& b) const;

    /// Inverse of -Laplacian on mean-zero functions; the zero mode is annihilated.
    RealField green(const RealField& f) const;

    /// 3D DFT with forward kernel e^{-i k.x} and inverse scaled by 1/n^3.
    ComplexField dft(const ComplexField& f) const;
    ComplexField idft(const ComplexField& f) const;

    double integrate(const RealField& f) const;

private:
    template <class T, class M>
    std::vector<T> along_axis(const M& mat, const std::vector<T>& f, int axis) const;

    int N_;
    std::size_t n_;
    Eigen::MatrixXd D_;
    Eigen::MatrixXcd F_;     ///< forward 1D DFT
    Eigen::MatrixXcd Finv_;  ///< inverse 1D DFT
};

RealField component(const VectorField& b, int j);
void set_component(VectorField& b, int j, const RealField& f);

}  // namespace ucplab::sw
