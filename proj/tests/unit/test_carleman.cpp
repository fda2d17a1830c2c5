#include "doctest.h"

#include <cmath>

#include "ucplab/carleman.hpp"
#include "ucplab/rng.hpp"

using namespace ucplab;

namespace {

// Composite Simpson on [0, T] with m (even) panels.
template <class F>
double simpson(F f, double T, int m) {
    const double h = T / m;
    double s = f(0.0) + f(T);
    for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return s * h / 3.0;
}

SpinorField gaussian(const CarlemanGeometry& geom, double centre, double width) {
    SpinorField v(geom.domain);
    const auto t = slice_coordinates(geom.domain);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double g = std::exp(-std::pow((t[i] - centre) / width, 2));
        v(i, 0) = g;
        v(i, 1) = cplx{0.0, 0.5 * g};
    }
    return v;
}

}  // namespace

TEST_CASE("bump cutoff") {
    const auto geom = CarlemanGeometry::interval(0.1, 101);
    CHECK(bump_cutoff(geom, 0.05) == 1.0);
    CHECK(bump_cutoff(geom, 0.095) == 0.0);
    CHECK(bump_cutoff(geom, 0.085) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(bump_cutoff(geom, 0.0) == 1.0);
    CHECK(bump_cutoff(geom, 0.1) == 0.0);
    double prev = 1.0;
    for (int k = 0; k <= 100; ++k) {
        const double c = bump_cutoff(geom, 0.001 * k);
        CHECK(c <= prev);
        prev = c;
    }
    CHECK_THROWS_AS(bump_cutoff(geom, -0.01), PreconditionError);
    CHECK_THROWS_AS(bump_cutoff(geom, 0.2), PreconditionError);
    CHECK(smoothstep_derivative(0.0) == 0.0);
    CHECK(smoothstep_derivative(0.5) == doctest::Approx(1.875));
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(CarlemanGeometry::interval(0.0, 11), PreconditionError);
    CarlemanGeometry g = CarlemanGeometry::interval(0.1, 11);
    g.plateau_end = 0.95;
    CHECK_THROWS_AS(g.validate(), PreconditionError);
    CHECK_NOTHROW(CarlemanGeometry::annulus(1.0, 0.1, 11, 16));
}

TEST_CASE("weighted L2") {
    const auto geom = CarlemanGeometry::interval(0.1, 401);
    SpinorField zero(geom.domain);
    CHECK(weighted_l2(zero, 10.0, geom) == 0.0);

    SpinorField one(geom.domain);
    for (std::size_t i = 0; i < one.points(); ++i) one(i, 0) = 1.0;
    CHECK(weighted_l2(one, 0.0, geom) == doctest::Approx(0.1).epsilon(1e-12));

    const auto v = gaussian(geom, 0.05, 0.01);
    const double R = 10.0;
    const double oracle = simpson(
        [&](double t) { return std::exp(R * (0.1 - t) * (0.1 - t)) * 1.25 * std::exp(-2.0 * std::pow((t - 0.05) / 0.01, 2)); },
        0.1, 40000);
    CHECK(std::abs(weighted_l2(v, R, geom) - oracle) < 1e-6 * oracle);

    double prev = 0.0;
    for (double r : {0.0, 1.0, 10.0, 100.0, 1e3, 1e4}) {
        const double w = weighted_l2(v, r, geom);
        CHECK(w > prev);
        prev = w;
    }

    const auto big = weighted_l2_log(v, 1e6, geom);
    CHECK_FALSE(big.is_zero);
    CHECK(std::isfinite(big.log_value));
    CHECK(big.log_value > 1e6 * 0.003);

    SpinorField other(IntervalDomain{0.0, 0.1, 11});
    CHECK_THROWS_AS(weighted_l2(other, 1.0, geom), DomainMismatch);
    CHECK_THROWS_AS(weighted_l2(v, -1.0, geom), PreconditionError);
}

TEST_CASE("weighted L2 on the annulus integrates with arc length") {
    const auto geom = CarlemanGeometry::annulus(1.0, 0.1, 201, 16);
    SpinorField one(geom.domain);
    for (std::size_t i = 0; i < one.points(); ++i) one(i, 1) = 1.0;
    // int_1^{1.1} 2 pi r dr
    CHECK(weighted_l2(one, 0.0, geom) == doctest::Approx(kPi * (1.21 - 1.0)).epsilon(1e-10));
}

TEST_CASE("Carleman ratio") {
    const auto geom = CarlemanGeometry::interval(0.1, 401);
    const auto op = interval_operator(std::get<IntervalDomain>(geom.domain));

    SpinorField zero(geom.domain);
    const auto z = carleman_ratio(op, zero, 10.0, geom);
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    CHECK_FALSE(z.ratio.has_value());
    CHECK_FALSE(z.violation);

    const auto sampler = random_cutoff_sampler(geom, 42);
    const auto v = sampler(0);
    const auto rep = carleman_ratio(op, v, 100.0, geom);
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio == doctest::Approx(100.0 * rep.lhs / rep.rhs).epsilon(1e-12));

    const auto rotated = cplx{std::cos(0.7), std::sin(0.7)} * v;
    const auto rot = carleman_ratio(op, rotated, 100.0, geom);
    CHECK(std::abs(*rot.ratio - *rep.ratio) < 1e-14 * *rep.ratio);

    const auto bad = gaussian(geom, 0.098, 0.01);
    CHECK_THROWS_AS(carleman_ratio(op, bad, 10.0, geom), PreconditionError);

    const auto same = perturbed_carleman_ratio(op, Perturbation::zero(geom.domain), v, 100.0, geom);
    CHECK(*same.ratio == *rep.ratio);
    CHECK(same.C0.value() == 0.0);
}

TEST_CASE("perturbed ratio checks admissibility") {
    const auto geom = CarlemanGeometry::interval(0.1, 401);
    const auto op = interval_operator(std::get<IntervalDomain>(geom.domain));
    const auto v = random_cutoff_sampler(geom, 3)(0);
    SpinorField a(geom.domain);
    for (std::size_t i = 0; i < a.points(); ++i) a(i, 0) = 1.0;

    const auto P = Perturbation::pointwise(a);
    const auto rep = perturbed_carleman_ratio(op, P, v, 100.0, geom);
    CHECK(std::abs(*rep.C0 - admissibility_bound(P, v).C0) < 1e-10);

    CHECK_THROWS_AS(perturbed_carleman_ratio(op, Perturbation::rank_one(a), v, 100.0, geom), NonAdmissibleError);
}

TEST_CASE("constant sweep") {
    const auto geom = CarlemanGeometry::interval(0.1, 201);
    const auto op = interval_operator(std::get<IntervalDomain>(geom.domain));
    const auto grid = log_spaced(10.0, 1000.0, 7);
    CHECK(grid.front() == doctest::Approx(10.0));
    CHECK(grid.back() == doctest::Approx(1000.0));

    const FieldSampler zeros = [&](std::size_t) { return SpinorField(geom.domain); };
    const auto deg = constant_sweep(op, zeros, grid, geom);
    CHECK(deg.degenerate);
    CHECK_FALSE(deg.bounded);

    SweepOptions opts;
    opts.samples = 0;
    CHECK_THROWS_AS(constant_sweep(op, zeros, grid, geom, opts), PreconditionError);
    CHECK_THROWS_AS(constant_sweep(op, zeros, {10.0, 5.0, 100.0}, geom), PreconditionError);

    const auto sampler = random_cutoff_sampler(geom, 17);
    SweepOptions serial;
    serial.samples = 20;
    SweepOptions parallel = serial;
    parallel.jobs = 4;
    const auto a = constant_sweep(op, sampler, grid, geom, serial);
    const auto b = constant_sweep(op, sampler, grid, geom, parallel);
    CHECK(a.applicable);
    CHECK_FALSE(a.degenerate);
    REQUIRE(a.rows.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(a.rows[k].R == grid[k]);
        CHECK(a.rows[k].constant_estimate == b.rows[k].constant_estimate);
        CHECK(a.rows[k].samples == 20);
    }
    CHECK(a.max_over_min == b.max_over_min);

    const auto narrow = constant_sweep(op, sampler, {10.0, 20.0, 50.0}, geom, serial);
    CHECK_FALSE(narrow.applicable);
}

TEST_CASE("decay check") {
    const auto geom = CarlemanGeometry::interval(0.1, 401);
    const auto op = interval_operator(std::get<IntervalDomain>(geom.domain));
    const auto grid = log_spaced(10.0, 1000.0, 7);
    SpinorField zero(geom.domain);
    SpinorField a(geom.domain);
    for (std::size_t i = 0; i < a.points(); ++i) a(i, 1) = 1.0;

    const auto rep = ucp_decay_check(op, Perturbation::pointwise(a), zero, grid, geom, 0.2);
    CHECK(rep.measured == 0.0);
    CHECK(rep.cutoff_integral == 0.0);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.all_satisfied);
    for (const auto& row : rep.rows) {
        CHECK(row.conclusive);
        CHECK(std::exp(row.log_factor) > 0.0);
        CHECK(row.bound == 0.0);
    }
    const double expected = -21.0 * 0.01 / 100.0;
    CHECK(rep.expected_slope == doctest::Approx(expected));
    CHECK(std::abs(rep.asymptotic_slope - expected) < 0.01 * std::abs(expected));

    // nonzero field that is not a solution
    const auto v = random_cutoff_sampler(geom, 1)(0);
    CHECK_THROWS_AS(ucp_decay_check(op, Perturbation::zero(geom.domain), v, grid, geom, 0.2), PreconditionError);
    CHECK_THROWS_AS(ucp_decay_check(op, Perturbation::zero(geom.domain), zero, grid, geom, 0.0), PreconditionError);
}

TEST_CASE("decay check reports inconclusive below the crossover") {
    const auto geom = CarlemanGeometry::interval(0.1, 101);
    const auto op = interval_operator(std::get<IntervalDomain>(geom.domain));
    // nonvanishing u solves D u + M u = 0 for M = -Du u^* / |u|^2
    SpinorField u(geom.domain);
    const auto t = slice_coordinates(geom.domain);
    for (std::size_t i = 0; i < t.size(); ++i) u(i, 0) = std::exp(5.0 * t[i]);
    const auto Du = dirac_apply(op, u);
    std::vector<Mat2> m(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) m[i] = -Du.at(i) * u.at(i).adjoint() / u.at(i).squaredNorm();
    const auto P = Perturbation::pointwise_linear(geom.domain, m);
    const auto rep = ucp_decay_check(op, P, u, {1.0, 2.0}, geom, 1.0);
    CHECK(rep.C0 > 1.0);
    CHECK(rep.inconclusive);
    CHECK_FALSE(rep.all_satisfied);
    for (const auto& row : rep.rows) CHECK_FALSE(row.conclusive);
}

TEST_CASE("appendix decomposition") {
    const auto geom = CarlemanGeometry::interval(0.1, 401);
    const auto& grid = std::get<IntervalDomain>(geom.domain);
    CounterRng rng(99);
    auto rand_mat = [&] {
        Mat2 m;
        m << cplx{rng.normal(), rng.normal()}, cplx{rng.normal(), rng.normal()}, cplx{rng.normal(), rng.normal()},
            cplx{rng.normal(), rng.normal()};
        return m;
    };
    const auto op = interval_operator(grid, {0.3 * rand_mat(), 2.0 * rand_mat(), 0.3 * rand_mat()});
    SpinorField a(geom.domain);
    for (std::size_t i = 0; i < a.points(); ++i) a.at(i) = Vec2(std::cos(5.0 * i), cplx{0.0, 0.5});
    const auto P = Perturbation::pointwise(a);

    SpinorField zero(geom.domain);
    const auto jz = appendix_decomposition(op, P, zero, 100.0, geom);
    CHECK(jz.J0 == 0.0);
    CHECK(jz.J1 == 0.0);
    CHECK(jz.J_err == 0.0);

    const auto sampler = random_cutoff_sampler(geom, 5);
    for (std::size_t s = 0; s < 10; ++s) {
        const auto J = appendix_decomposition(op, P, sampler(s), 50.0, geom);
        CHECK(J.split_defect() < 1e-10);
        CHECK(J.epsilon == 0.25);
    }
    CHECK_THROWS_AS(appendix_decomposition(op, P, gaussian(geom, 0.098, 0.01), 10.0, geom), PreconditionError);
}

TEST_CASE("appendix mixed term converges for constant coefficients") {
    Mat2 B;
    B << 0.5, cplx{0.0, 0.2}, cplx{0.0, -0.2}, -0.3;
    std::vector<double> defect, h;
    for (std::size_t n : {201u, 401u, 801u}) {
        const auto geom = CarlemanGeometry::interval(0.1, n);
        const auto& grid = std::get<IntervalDomain>(geom.domain);
        const auto op = interval_operator(grid, {B, Mat2::Zero(), Mat2::Zero()});
        SpinorField v(geom.domain);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = grid.node(i);
            v.at(i) = std::sin(kPi * t / 0.1) * bump_cutoff(geom, std::min(t, 0.1)) * Vec2(1.0, cplx{0.4, 0.1});
        }
        const auto J = appendix_decomposition(op, Perturbation::zero(geom.domain), v, 100.0, geom);
        CHECK(std::abs(J.J3) < 1e-12 * J.J0);
        defect.push_back(std::abs(J.J_mix - 100.0 * J.J0 - J.J_skew_pert));
        h.push_back(grid.spacing());
    }
    for (std::size_t k = 1; k < defect.size(); ++k)
        CHECK(std::log(defect[k - 1] / defect[k]) / std::log(h[k - 1] / h[k]) >= 1.9);
}
