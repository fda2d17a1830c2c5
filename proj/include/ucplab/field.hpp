#pragma once

#include <Eigen/Dense>

#include <span>
#include <variant>
#include <vector>

#include "ucplab/common.hpp"

namespace ucplab {

/// Uniform grid on [t0, t1] with n nodes. Each node is one slice (point mass).
struct IntervalDomain {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t n = 2;

    double spacing() const { return (t1 - t0) / static_cast<double>(n - 1); }
    double node(std::size_t i) const { return t0 + spacing() * static_cast<double>(i); }
    bool operator==(const IntervalDomain&) const = default;
};

/// Polar grid on r_inner <= r <= r_outer, 0 <= theta < 2 pi.
/// Slices are the circles r = const; the normal coordinate is t = r - r_inner.
struct AnnulusDomain {
    double r_inner = 1.0;
    double r_outer = 1.1;
    std::size_t nr = 2;
    std::size_t ntheta = 8;

    double dr() const { return (r_outer - r_inner) / static_cast<double>(nr - 1); }
    double dtheta() const { return 2.0 * kPi / static_cast<double>(ntheta); }
    double radius(std::size_t i) const { return r_inner + dr() * static_cast<double>(i); }
    double angle(std::size_t k) const { return dtheta() * static_cast<double>(k); }
    bool operator==(const AnnulusDomain&) const = default;
};

/// Periodic grid of (2N+1)^3 points on [0, 2 pi)^3 carrying Fourier modes |k_j| <= N.
struct TorusDomain {
    int N = 1;

    std::size_t side() const { return static_cast<std::size_t>(2 * N + 1); }
    bool operator==(const TorusDomain&) const = default;
};

using Domain = std::variant<IntervalDomain, AnnulusDomain, TorusDomain>;

std::size_t point_count(const Domain& d);

/// Trapezoid quadrature weight of every grid point (periodic directions are uniform).
std::vector<double> quadrature_weights(const Domain& d);

void validate(const Domain& d);

/// Complex rank-2 field sampled on a grid. Layout: point-major, fiber components innermost.
///
/// For the interval and annulus the points are grouped into slices along the
/// normal coordinate; slice i occupies a contiguous block of slice_dim() values.
class SpinorField {
public:
    static constexpr std::size_t kRank = 2;

    SpinorField() = default;
    explicit SpinorField(Domain domain);
    SpinorField(Domain domain, std::vector<cplx> values);

    const Domain& domain() const { return domain_; }
    std::size_t points() const { return values_.size() / kRank; }

    cplx& operator()(std::size_t point, std::size_t comp) { return values_[point * kRank + comp]; }
    cplx operator()(std::size_t point, std::size_t comp) const { return values_[point * kRank + comp]; }

    std::span<cplx> values() { return values_; }
    std::span<const cplx> values() const { return values_; }

    Eigen::Map<Eigen::Vector2cd> at(std::size_t point) {
        return Eigen::Map<Eigen::Vector2cd>(values_.data() + point * kRank);
    }
    Eigen::Map<const Eigen::Vector2cd> at(std::size_t point) const {
        return Eigen::Map<const Eigen::Vector2cd>(values_.data() + point * kRank);
    }

    /// Sliced domains only (interval, annulus).
    std::size_t slices() const;
    std::size_t slice_dim() const;
    Eigen::Map<Eigen::VectorXcd> slice(std::size_t i);
    Eigen::Map<const Eigen::VectorXcd> slice(std::size_t i) const;

    double point_norm(std::size_t point) const { return at(point).norm(); }
    double sup_norm() const;

    SpinorField& operator+=(const SpinorField& other);
    SpinorField& operator*=(cplx s);

private:
    Domain domain_{};
    std::vector<cplx> values_;
};

SpinorField operator+(SpinorField a, const SpinorField& b);
SpinorField operator*(cplx s, SpinorField a);

void require_same_domain(const SpinorField& a, const SpinorField& b, const char* what);

/// Quadrature L^2 inner product (Hermitian, linear in the first slot).
cplx l2_inner(const SpinorField& a, const SpinorField& b);
double l2_norm(const SpinorField& a);

/// Normal coordinate of each slice: t for the interval, r - r_inner for the annulus.
std::vector<double> slice_coordinates(const Domain& d);

/// Quadrature weights inside a slice: 1 for a point slice, r * dtheta on a circle.
std::vector<double> slice_point_weights(const Domain& d, std::size_t slice);

/// Trapezoid weights along the normal coordinate.
std::vector<double> normal_weights(const Domain& d);

}  // namespace ucplab
