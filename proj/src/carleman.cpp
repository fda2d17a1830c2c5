#include "ucplab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "ucplab/rng.hpp"

namespace ucplab {

namespace {

double normal_extent(const Domain& d) {
    if (const auto* g = std::get_if<IntervalDomain>(&d)) return g->t1 - g->t0;
    if (const auto* g = std::get_if<AnnulusDomain>(&d)) return g->r_outer - g->r_inner;
    throw PreconditionError("Carleman geometry needs an interval or annulus domain");
}

double weighted_slice_norm2(const SpinorField& v, std::size_t i, const std::vector<double>& pw) {
    const auto s = v.slice(i);
    double acc = 0.0;
    for (std::size_t p = 0; p < pw.size(); ++p)
        for (std::size_t c = 0; c < SpinorField::kRank; ++c)
            acc += pw[p] * std::norm(s(static_cast<Eigen::Index>(p * SpinorField::kRank + c)));
    return acc;
}

double weighted_dot_re(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, const std::vector<double>& pw) {
    double acc = 0.0;
    for (std::size_t p = 0; p < pw.size(); ++p)
        for (std::size_t c = 0; c < SpinorField::kRank; ++c) {
            const auto k = static_cast<Eigen::Index>(p * SpinorField::kRank + c);
            acc += pw[p] * std::real(x(k) * std::conj(y(k)));
        }
    return acc;
}

double weighted_norm2(const Eigen::VectorXcd& x, const std::vector<double>& pw) { return weighted_dot_re(x, x, pw); }

/// log sum_i exp(log_terms[i]) over finite entries
LogIntegral log_sum(const std::vector<double>& log_terms) {
    LogIntegral out;
    double m = -std::numeric_limits<double>::infinity();
    for (double x : log_terms) m = std::max(m, x);
    if (!std::isfinite(m)) return out;
    double s = 0.0;
    for (double x : log_terms)
        if (std::isfinite(x)) s += std::exp(x - m);
    out.is_zero = false;
    out.log_value = m + std::log(s);
    return out;
}

LogIntegral weighted_log_of_slices(const std::vector<double>& slice_mass, const std::vector<double>& t, double R,
                                   const std::vector<double>& trap, double T) {
    std::vector<double> terms(slice_mass.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < slice_mass.size(); ++i) {
        if (slice_mass[i] > 0.0 && trap[i] > 0.0) {
            const double s = T - t[i];
            terms[i] = R * s * s + std::log(trap[i] * slice_mass[i]);
        }
    }
    return log_sum(terms);
}

void require_domain(const SpinorField& v, const CarlemanGeometry& geom, const char* what) {
    if (!(v.domain() == geom.domain)) throw DomainMismatch(std::string(what) + ": field is not on the geometry's grid");
}

CarlemanReport ratio_from(const SpinorField& v, const SpinorField& Dv, double R, const CarlemanGeometry& geom) {
    CarlemanReport rep;
    rep.R = R;
    const auto L = weighted_l2_log(v, R, geom);
    const auto Rr = weighted_l2_log(Dv, R, geom);
    rep.lhs = L.value();
    rep.rhs = Rr.value();
    rep.log_lhs = L.is_zero ? -std::numeric_limits<double>::infinity() : L.log_value;
    rep.log_rhs = Rr.is_zero ? -std::numeric_limits<double>::infinity() : Rr.log_value;
    if (!L.is_zero && Rr.is_zero) rep.violation = true;
    if (!L.is_zero && !Rr.is_zero) {
        rep.ratio = R * std::exp(L.log_value - Rr.log_value);
        rep.constant_estimate = *rep.ratio;
    }
    return rep;
}

}  // namespace

CarlemanGeometry CarlemanGeometry::interval(double T, std::size_t n) {
    CarlemanGeometry g;
    g.T = T;
    g.domain = IntervalDomain{0.0, T, n};
    g.validate();
    return g;
}

CarlemanGeometry CarlemanGeometry::annulus(double r_inner, double T, std::size_t nr, std::size_t ntheta) {
    CarlemanGeometry g;
    g.T = T;
    g.domain = AnnulusDomain{r_inner, r_inner + T, nr, ntheta};
    g.validate();
    return g;
}

void CarlemanGeometry::validate() const {
    if (!(T > 0.0)) throw PreconditionError("Carleman geometry needs T > 0");
    if (!(0.0 < plateau_end && plateau_end < cutoff_end && cutoff_end < 1.0))
        throw PreconditionError("cutoff plateau fractions must satisfy 0 < plateau < cutoff < 1");
    ucplab::validate(domain);
    if (std::abs(normal_extent(domain) - T) > 1e-12 * std::max(1.0, T))
        throw PreconditionError("geometry domain does not span [0, T] in the normal coordinate");
}

double smoothstep(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double smoothstep_derivative(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 30.0 * x * x * (x - 1.0) * (x - 1.0);
}

double bump_cutoff(const CarlemanGeometry& geom, double t) {
    if (t < 0.0 || t > geom.T * (1.0 + 1e-12)) throw PreconditionError("bump_cutoff: t outside [0, T]");
    const double a = geom.plateau_end * geom.T;
    const double b = geom.cutoff_end * geom.T;
    if (t <= a) return 1.0;
    if (t >= b) return 0.0;
    return 1.0 - smoothstep((t - a) / (b - a));
}

double bump_cutoff_derivative(const CarlemanGeometry& geom, double t) {
    if (t < 0.0 || t > geom.T * (1.0 + 1e-12)) throw PreconditionError("bump_cutoff: t outside [0, T]");
    const double a = geom.plateau_end * geom.T;
    const double b = geom.cutoff_end * geom.T;
    return -smoothstep_derivative((t - a) / (b - a)) / (b - a);
}

double LogIntegral::value() const { return is_zero ? 0.0 : std::exp(log_value); }

LogIntegral weighted_l2_log(const SpinorField& v, double R, const CarlemanGeometry& geom) {
    require_domain(v, geom, "weighted_l2");
    if (R < 0.0) throw PreconditionError("weighted_l2 needs R >= 0");
    const auto t = slice_coordinates(geom.domain);
    const auto trap = normal_weights(geom.domain);
    std::vector<double> mass(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        mass[i] = weighted_slice_norm2(v, i, slice_point_weights(geom.domain, i));
    return weighted_log_of_slices(mass, t, R, trap, geom.T);
}

double weighted_l2(const SpinorField& v, double R, const CarlemanGeometry& geom) {
    return weighted_l2_log(v, R, geom).value();
}

void require_cutoff_support(const SpinorField& v, const CarlemanGeometry& geom, double tol) {
    const auto t = slice_coordinates(geom.domain);
    const std::size_t m = v.slice_dim() / SpinorField::kRank;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.95 * geom.T) continue;
        for (std::size_t p = 0; p < m; ++p)
            if (v.point_norm(i * m + p) >= tol)
                throw PreconditionError("field does not vanish on the outer 5% of the annulus (support condition)");
    }
}

CarlemanReport carleman_ratio(const DiracOperator& op, const SpinorField& v, double R, const CarlemanGeometry& geom) {
    require_domain(v, geom, "carleman_ratio");
    require_cutoff_support(v, geom);
    return ratio_from(v, dirac_apply(op, v), R, geom);
}

CarlemanReport perturbed_carleman_ratio(const DiracOperator& op, const Perturbation& P, const SpinorField& v, double R,
                                        const CarlemanGeometry& geom) {
    require_domain(v, geom, "perturbed_carleman_ratio");
    require_cutoff_support(v, geom);
    const auto verdict = admissibility_bound(P, v);
    if (!verdict.admissible) throw NonAdmissibleError(verdict.failed_bound, verdict.witness_point);
    auto rep = ratio_from(v, dirac_apply(op, v) + P(v), R, geom);
    rep.C0 = verdict.C0;
    return rep;
}

FieldSampler random_cutoff_sampler(const CarlemanGeometry& geom, std::uint64_t seed, int max_modes) {
    if (max_modes < 1) throw PreconditionError("random_cutoff_sampler needs at least one mode");
    return [geom, seed, max_modes](std::size_t index) {
        CounterRng rng(seed, index);
        SpinorField v(geom.domain);
        const auto t = slice_coordinates(geom.domain);
        const std::size_t m = v.slice_dim() / SpinorField::kRank;
        const int modes = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_modes));
        const int angular = std::holds_alternative<AnnulusDomain>(geom.domain) ? 2 : 0;
        for (int k = 1; k <= modes; ++k) {
            for (int q = -angular; q <= angular; ++q) {
                Vec2 c;
                c << cplx{rng.normal(), rng.normal()}, cplx{rng.normal(), rng.normal()};
                c /= static_cast<double>(k);
                for (std::size_t i = 0; i < t.size(); ++i) {
                    const double radial = std::sin(k * kPi * t[i] / geom.T) * bump_cutoff(geom, std::min(t[i], geom.T));
                    for (std::size_t p = 0; p < m; ++p) {
                        cplx phase = 1.0;
                        if (const auto* g = std::get_if<AnnulusDomain>(&geom.domain))
                            phase = std::polar(1.0, q * g->angle(p));
                        v.at(i * m + p) += (radial * phase) * c;
                    }
                }
            }
        }
        // exact zeros beyond the cutoff
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i] >= geom.cutoff_end * geom.T) v.slice(i).setZero();
        return v;
    };
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (count == 0 || !(lo > 0.0) || !(hi >= lo)) throw PreconditionError("log_spaced needs 0 < lo <= hi, count > 0");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        out[k] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
    }
    return out;
}

SweepSummary constant_sweep(const DiracOperator& op, const FieldSampler& sampler, const std::vector<double>& R_grid,
                            const CarlemanGeometry& geom, const SweepOptions& opts, const Perturbation* P) {
    if (opts.samples == 0) throw PreconditionError("constant_sweep: empty sample set");
    if (R_grid.empty()) throw PreconditionError("constant_sweep: empty R grid");
    for (std::size_t k = 0; k < R_grid.size(); ++k) {
        if (!(R_grid[k] > 0.0)) throw PreconditionError("constant_sweep: R values must be positive");
        if (k > 0 && !(R_grid[k] > R_grid[k - 1])) throw PreconditionError("constant_sweep: R grid must be ascending");
    }

    std::vector<SpinorField> fields;
    fields.reserve(opts.samples);
    for (std::size_t s = 0; s < opts.samples; ++s) fields.push_back(sampler(s));

    SweepSummary sum;
    sum.boundedness_factor = opts.boundedness_factor;
    sum.applicable = R_grid.size() >= 3 && R_grid.back() / R_grid.front() >= 100.0 * (1.0 - 1e-12);
    sum.rows.resize(R_grid.size());

    auto evaluate = [&](std::size_t k) {
        CarlemanReport best;
        best.R = R_grid[k];
        best.samples = fields.size();
        bool any = false;
        for (std::size_t s = 0; s < fields.size(); ++s) {
            auto rep = P ? perturbed_carleman_ratio(op, *P, fields[s], R_grid[k], geom)
                         : carleman_ratio(op, fields[s], R_grid[k], geom);
            if (rep.C0) best.C0 = std::max(best.C0.value_or(0.0), *rep.C0);
            if (rep.violation) best.violation = true;
            if (rep.ratio && (!any || *rep.ratio > best.constant_estimate)) {
                any = true;
                best.constant_estimate = *rep.ratio;
                best.ratio = rep.ratio;
                best.lhs = rep.lhs;
                best.rhs = rep.rhs;
                best.log_lhs = rep.log_lhs;
                best.log_rhs = rep.log_rhs;
                best.argmax_sample = s;
            }
        }
        sum.rows[k] = best;
    };

    const unsigned jobs = std::max(1u, opts.jobs);
    if (jobs == 1) {
        for (std::size_t k = 0; k < R_grid.size(); ++k) evaluate(k);
    } else {
        std::vector<std::future<void>> pending;
        for (std::size_t k = 0; k < R_grid.size(); ++k) {
            if (pending.size() == jobs) {
                pending.front().get();
                pending.erase(pending.begin());
            }
            pending.push_back(std::async(std::launch::async, evaluate, k));
        }
        for (auto& f : pending) f.get();
    }

    sum.degenerate = std::none_of(sum.rows.begin(), sum.rows.end(), [](const auto& r) { return r.ratio.has_value(); });
    if (!sum.degenerate) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& r : sum.rows) {
            lo = std::min(lo, r.constant_estimate);
            hi = std::max(hi, r.constant_estimate);
        }
        sum.sup_constant = hi;
        sum.max_over_min = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    }
    for (const auto& r : sum.rows)
        if (r.C0) sum.C0_max = std::max(sum.C0_max.value_or(0.0), *r.C0);
    sum.bounded = sum.applicable && !sum.degenerate && sum.max_over_min <= opts.boundedness_factor;
    return sum;
}

DecayReport ucp_decay_check(const DiracOperator& op, const Perturbation& P, const SpinorField& u,
                            const std::vector<double>& R_grid, const CarlemanGeometry& geom, double C,
                            double residual_tol) {
    require_domain(u, geom, "ucp_decay_check");
    if (!(C > 0.0)) throw PreconditionError("ucp_decay_check needs a positive Carleman constant");
    DecayReport rep;
    rep.C = C;

    const auto res = dirac_apply(op, u) + P(u);
    rep.residual = res.sup_norm();
    if (rep.residual > residual_tol)
        throw PreconditionError("ucp_decay_check: u does not solve the perturbed equation (residual " +
                                std::to_string(rep.residual) + ")");

    const auto verdict = admissibility_bound(P, u);
    if (!verdict.admissible) throw NonAdmissibleError(verdict.failed_bound, verdict.witness_point);
    rep.C0 = verdict.C0;

    const auto t = slice_coordinates(geom.domain);
    const auto trap = normal_weights(geom.domain);
    const std::size_t m = u.slice_dim() / SpinorField::kRank;
    const double h = t[1] - t[0];
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto pw = slice_point_weights(geom.domain, i);
        const double dphi = bump_cutoff_derivative(geom, std::min(t[i], geom.T));
        Eigen::VectorXcd cut = op.cl_dt(i) * (dphi * u.slice(i));
        rep.cutoff_integral += trap[i] * weighted_norm2(cut, pw);
        if (t[i] <= 0.5 * geom.T + 1e-12 * h) {
            const bool edge = i == 0 || (i + 1 < t.size() && t[i + 1] > 0.5 * geom.T + 1e-12 * h);
            rep.measured += (edge ? 0.5 * h : h) * weighted_slice_norm2(u, i, pw);
        }
    }
    (void)m;

    const double T2 = geom.T * geom.T;
    rep.expected_slope = -21.0 * T2 / 100.0;
    const double cross = 2.0 * C * rep.C0;
    auto log_factor = [&](double R) { return std::log(2.0 * C) - std::log(R - cross) - 21.0 * R * T2 / 100.0; };

    std::vector<double> xs, ys;
    rep.all_satisfied = true;
    for (double R : R_grid) {
        DecayRow row;
        row.R = R;
        row.conclusive = R > cross;
        if (row.conclusive) {
            row.log_factor = log_factor(R);
            row.bound = std::exp(row.log_factor) * rep.cutoff_integral;
            row.satisfied = rep.measured <= row.bound * (1.0 + 1e-12) + 1e-300;
            rep.all_satisfied = rep.all_satisfied && row.satisfied;
            xs.push_back(R);
            ys.push_back(row.log_factor);
        }
        rep.rows.push_back(row);
    }
    rep.inconclusive = xs.empty();
    if (rep.inconclusive) rep.all_satisfied = false;
    if (xs.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            mx += xs[k];
            my += ys[k];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sxy += (xs[k] - mx) * (ys[k] - my);
            sxx += (xs[k] - mx) * (xs[k] - mx);
        }
        rep.grid_slope = sxy / sxx;
    }
    // The prefactor contributes -1/(R - 2CC0) to the slope; past R_a it is below
    // 1e-4 of the exponential rate.
    const double grid_top = R_grid.empty() ? 0.0 : R_grid.back();
    rep.asymptotic_R = std::max(grid_top, cross + 1e4 / (21.0 * T2 / 100.0));
    const double Ra = rep.asymptotic_R;
    rep.asymptotic_slope = (log_factor(10.0 * Ra) - log_factor(Ra)) / (9.0 * Ra);
    return rep;
}

double JTerms::split_defect() const {
    const double denom = std::max(std::abs(J1), std::numeric_limits<double>::min());
    return std::abs(J1 - (J_skew + J_sym + J_mix)) / denom;
}

JTerms appendix_decomposition(const DiracOperator& op, const Perturbation& P, const SpinorField& v, double R,
                              const CarlemanGeometry& geom) {
    require_domain(v, geom, "appendix_decomposition");
    require_cutoff_support(v, geom);
    JTerms J;
    const auto t = slice_coordinates(geom.domain);
    const auto trap = normal_weights(geom.domain);
    const std::size_t n = t.size();
    const std::size_t m = v.slice_dim() / SpinorField::kRank;
    const double h = t[1] - t[0];

    SpinorField v0(v.domain());
    std::vector<double> growth(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = geom.T - t[i];
        growth[i] = std::exp(0.5 * R * s * s);
        v0.slice(i) = growth[i] * v.slice(i);
    }
    const auto dv0 = normal_derivative(v0);
    const auto pv = P(v);

    for (std::size_t i = 0; i < n; ++i) {
        const auto pw = slice_point_weights(geom.domain, i);
        const double s = geom.T - t[i];
        const Eigen::VectorXcd x0 = v0.slice(i);
        const Eigen::VectorXcd skew = dv0.slice(i) + op.C(i) * x0;
        const Eigen::VectorXcd sym_unpert = op.B(i) * x0 + R * s * x0;
        const Eigen::VectorXcd pert = growth[i] * (op.cl_dt(i).adjoint() * pv.slice(i));
        const Eigen::VectorXcd sym = sym_unpert + pert;

        SliceMatrix dB;
        if (i == 0)
            dB = (-3.0 * op.B(0) + 4.0 * op.B(1) - op.B(2)) / (2.0 * h);
        else if (i == n - 1)
            dB = (3.0 * op.B(n - 1) - 4.0 * op.B(n - 2) + op.B(n - 3)) / (2.0 * h);
        else
            dB = (op.B(i + 1) - op.B(i - 1)) / (2.0 * h);
        const SliceMatrix j3op = -dB + op.B(i) * op.C(i) - op.C(i) * op.B(i);

        const double w = trap[i];
        J.J0 += w * weighted_norm2(x0, pw);
        J.J_skew += w * weighted_norm2(skew, pw);
        J.J_sym += w * weighted_norm2(sym, pw);
        J.J_mix += 2.0 * w * weighted_dot_re(skew, sym, pw);
        J.J1 += w * weighted_norm2(skew + sym, pw);
        J.J3 += w * weighted_dot_re(x0, j3op * x0, pw);
        J.J_skew_pert += 2.0 * w * weighted_dot_re(skew, pert, pw);
        J.J_sym_pert += 2.0 * w * weighted_dot_re(sym_unpert, pert, pw);

        for (std::size_t p = 0; p < m; ++p) {
            const std::size_t pt = i * m + p;
            const double nv = v.point_norm(pt);
            const double q = nv > 0.0 ? pv.point_norm(pt) / nv : 0.0;
            J.J_err += w * pw[p] * x0.segment(static_cast<Eigen::Index>(2 * p), 2).squaredNorm() *
                       (R - q * q / J.epsilon);
        }
    }
    return J;
}

}  // namespace ucplab
