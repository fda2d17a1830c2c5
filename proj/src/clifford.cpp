#include "ucplab/clifford.hpp"

#include <array>
#include <string>

namespace ucplab {

namespace {

const std::array<Mat2, 3>& pauli_table() {
    static const std::array<Mat2, 3> table = [] {
        const cplx i{0.0, 1.0};
        std::array<Mat2, 3> s;
        s[0] << 0, 1, 1, 0;
        s[1] << 0, -i, i, 0;
        s[2] << 1, 0, 0, -1;
        return s;
    }();
    return table;
}

}  // namespace

const Mat2& pauli(int j) {
    if (j < 0 || j > 2) throw std::out_of_range("pauli index " + std::to_string(j));
    return pauli_table()[static_cast<std::size_t>(j)];
}

CliffordFrame CliffordFrame::standard(int dimension) {
    const cplx i{0.0, 1.0};
    std::vector<Mat2> g;
    switch (dimension) {
        case 1: {
            Mat2 j;
            j << 0, -1, 1, 0;
            g.push_back(j);
            break;
        }
        case 2:
        case 3:
            for (int k = 0; k < dimension; ++k) g.push_back(i * pauli(k));
            break;
        default:
            throw PreconditionError("Clifford frame dimension must be 1, 2 or 3");
    }
    return CliffordFrame(std::move(g));
}

const Mat2& CliffordFrame::generator(int j) const {
    if (j < 0 || j >= dimension())
        throw std::out_of_range("Clifford generator " + std::to_string(j) + " outside dimension " +
                                std::to_string(dimension()));
    return generators_[static_cast<std::size_t>(j)];
}

Mat2 CliffordFrame::covector(const double* c) const {
    Mat2 m = Mat2::Zero();
    for (int j = 0; j < dimension(); ++j) m += c[j] * generators_[static_cast<std::size_t>(j)];
    return m;
}

double CliffordFrame::clifford_defect() const {
    double worst = 0.0;
    for (int j = 0; j < dimension(); ++j)
        for (int k = 0; k < dimension(); ++k) {
            Mat2 ac = generator(j) * generator(k) + generator(k) * generator(j);
            if (j == k) ac += 2.0 * Mat2::Identity();
            worst = std::max(worst, ac.norm());
        }
    return worst;
}

double CliffordFrame::skew_defect() const {
    double worst = 0.0;
    for (const auto& g : generators_) worst = std::max(worst, (g.adjoint() + g).norm());
    return worst;
}

}  // namespace ucplab
