#pragma once

#include <string>
#include <vector>

namespace ucplab::sw {

/// Finite sums of products of one-variable factors, with exact derivatives of every order.
///
/// Each term is coeff * prod_f factor_f(x[var_f]); a variable appears at most once
/// per term, so a mixed partial of a term is the product of the factors' own
/// derivatives. Factor kinds: affine (offset + scale x), tanh, sin, cos of (scale x + offset).
class SmoothFunction {
public:
    enum class Kind { affine, tanh, sin, cos };

    struct Factor {
        std::size_t var = 0;
        Kind kind = Kind::affine;
        double scale = 1.0;
        double offset = 0.0;
    };

    struct Term {
        double coeff = 1.0;
        std::vector<Factor> factors;
    };

    SmoothFunction() = default;
    /// Throws PreconditionError if a term uses a variable twice or one >= dim.
    SmoothFunction(std::size_t dim, std::vector<Term> terms);

    static SmoothFunction zero(std::size_t dim) { return SmoothFunction(dim, {}); }
    /// coeff * x[var]
    static SmoothFunction coordinate(std::size_t dim, std::size_t var, double coeff = 1.0);

    std::size_t dim() const { return dim_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    double value(const std::vector<double>& x) const;
    std::vector<double> gradient(const std::vector<double>& x) const;
    /// Mixed partial with multiplicities alpha (length dim).
    double partial(const std::vector<double>& x, const std::vector<int>& alpha) const;
    /// Frobenius norm of the symmetric k-th derivative tensor:
    /// sqrt(sum_{|alpha| = k} k!/alpha! |d^alpha f|^2).
    double tensor_norm(const std::vector<double>& x, int order) const;

    /// Canonical text form used for hashing and reports.
    std::string describe() const;

private:
    std::size_t dim_ = 0;
    std::vector<Term> terms_;
};

/// m-th derivative of one factor at t.
double factor_derivative(const SmoothFunction::Factor& f, double t, int m);

/// All multi-indices of length dim summing to order.
std::vector<std::vector<int>> multi_indices(std::size_t dim, int order);

}  // namespace ucplab::sw
