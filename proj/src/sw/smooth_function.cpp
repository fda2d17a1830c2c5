#include "ucplab/sw/smooth_function.hpp"

#include <cmath>
#include <cstdio>

#include "ucplab/common.hpp"

namespace ucplab::sw {

namespace {

/// Polynomial P_m with d^m/du^m tanh(u) = P_m(tanh u); P_0 = y, P_{m+1} = P_m'(y) (1 - y^2).
std::vector<double> tanh_poly(int m) {
    std::vector<double> p{0.0, 1.0};
    for (int k = 0; k < m; ++k) {
        std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < p.size(); ++i) dp[i - 1] = static_cast<double>(i) * p[i];
        std::vector<double> next(dp.size() + 2, 0.0);
        for (std::size_t i = 0; i < dp.size(); ++i) {
            next[i] += dp[i];
            next[i + 2] -= dp[i];
        }
        p = std::move(next);
    }
    return p;
}

double horner(const std::vector<double>& p, double y) {
    double s = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) s = s * y + p[i];
    return s;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

void collect(std::size_t dim, int order, std::size_t pos, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (pos + 1 == dim) {
        cur[pos] = order;
        out.push_back(cur);
        return;
    }
    for (int k = order; k >= 0; --k) {
        cur[pos] = k;
        collect(dim, order - k, pos + 1, cur, out);
    }
}

}  // namespace

double factor_derivative(const SmoothFunction::Factor& f, double t, int m) {
    const double u = f.scale * t + f.offset;
    const double w = std::pow(f.scale, m);
    switch (f.kind) {
        case SmoothFunction::Kind::affine:
            if (m == 0) return u;
            return m == 1 ? f.scale : 0.0;
        case SmoothFunction::Kind::sin: return w * std::sin(u + 0.5 * kPi * m);
        case SmoothFunction::Kind::cos: return w * std::cos(u + 0.5 * kPi * m);
        case SmoothFunction::Kind::tanh: return w * horner(tanh_poly(m), std::tanh(u));
    }
    return 0.0;
}

std::vector<std::vector<int>> multi_indices(std::size_t dim, int order) {
    std::vector<std::vector<int>> out;
    if (dim == 0) return out;
    std::vector<int> cur(dim, 0);
    collect(dim, order, 0, cur, out);
    return out;
}

SmoothFunction::SmoothFunction(std::size_t dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        std::vector<bool> used(dim_, false);
        for (const auto& f : t.factors) {
            if (f.var >= dim_) throw PreconditionError("smooth function factor refers to a variable out of range");
            if (used[f.var]) throw PreconditionError("smooth function terms may use each variable at most once");
            used[f.var] = true;
        }
    }
}

SmoothFunction SmoothFunction::coordinate(std::size_t dim, std::size_t var, double coeff) {
    return SmoothFunction(dim, {Term{coeff, {Factor{var, Kind::affine, 1.0, 0.0}}}});
}

double SmoothFunction::value(const std::vector<double>& x) const {
    return partial(x, std::vector<int>(dim_, 0));
}

std::vector<double> SmoothFunction::gradient(const std::vector<double>& x) const {
    std::vector<double> g(dim_);
    std::vector<int> alpha(dim_, 0);
    for (std::size_t j = 0; j < dim_; ++j) {
        alpha[j] = 1;
        g[j] = partial(x, alpha);
        alpha[j] = 0;
    }
    return g;
}

double SmoothFunction::partial(const std::vector<double>& x, const std::vector<int>& alpha) const {
    if (x.size() != dim_ || alpha.size() != dim_) throw DomainMismatch("smooth function evaluated at a point of wrong dimension");
    double total = 0.0;
    for (const auto& t : terms_) {
        std::vector<bool> used(dim_, false);
        double prod = t.coeff;
        for (const auto& f : t.factors) {
            used[f.var] = true;
            prod *= factor_derivative(f, x[f.var], alpha[f.var]);
        }
        for (std::size_t j = 0; j < dim_ && prod != 0.0; ++j)
            if (!used[j] && alpha[j] > 0) prod = 0.0;
        total += prod;
    }
    return total;
}

double SmoothFunction::tensor_norm(const std::vector<double>& x, int order) const {
    if (order == 0) return std::abs(value(x));
    double s = 0.0;
    for (const auto& alpha : multi_indices(dim_, order)) {
        double mult = factorial(order);
        for (int a : alpha) mult /= factorial(a);
        const double d = partial(x, alpha);
        s += mult * d * d;
    }
    return std::sqrt(s);
}

std::string SmoothFunction::describe() const {
    static const char* names[] = {"affine", "tanh", "sin", "cos"};
    std::string out = "dim=" + std::to_string(dim_);
    char buf[128];
    for (const auto& t : terms_) {
        std::snprintf(buf, sizeof buf, ";%.17g", t.coeff);
        out += buf;
        for (const auto& f : t.factors) {
            std::snprintf(buf, sizeof buf, "*%s(x%zu,%.17g,%.17g)", names[static_cast<int>(f.kind)], f.var, f.scale,
                          f.offset);
            out += buf;
        }
    }
    return out;
}

}  // namespace ucplab::sw
