#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ucplab/common.hpp"

namespace ucplab {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

/// Pauli matrices sigma_1, sigma_2, sigma_3 (index 0..2).
const Mat2& pauli(int j);

/// Fiberwise Clifford multiplication on C^2.
///
/// Generators are unitary and skew-Hermitian with g_j g_k + g_k g_j = -2 delta_jk.
/// Shipped frames:
///   dim 1: J = [[0,-1],[1,0]]
///   dim 2: i sigma_1, i sigma_2
///   dim 3: i sigma_1, i sigma_2, i sigma_3
class CliffordFrame {
public:
    static CliffordFrame standard(int dimension);

    int dimension() const { return static_cast<int>(generators_.size()); }
    static constexpr int fiber_rank() { return 2; }

    /// Generator g_j, zero-based. Throws std::out_of_range.
    const Mat2& generator(int j) const;

    /// g_j * s. Throws std::out_of_range for a bad index.
    Vec2 apply(int j, const Vec2& s) const { return generator(j) * s; }

    /// sum_j c_j g_j for a real covector c (length = dimension).
    Mat2 covector(const double* c) const;

    /// max over j,k of || g_j g_k + g_k g_j + 2 delta_jk I ||.
    double clifford_defect() const;

    /// max over j of || g_j^* + g_j ||.
    double skew_defect() const;

private:
    explicit CliffordFrame(std::vector<Mat2> g) : generators_(std::move(g)) {}
    std::vector<Mat2> generators_;
};

/// Hermitian product linear in the first slot: <x, y> = sum_c x_c conj(y_c).
inline cplx herm(const Vec2& x, const Vec2& y) { return std::conj(x.dot(y)); }

}  // namespace ucplab
