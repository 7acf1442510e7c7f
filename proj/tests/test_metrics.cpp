#include <doctest.h>

#include <cmath>
#include <random>

#include "ricci/errors.hpp"
#include "ricci/metrics.hpp"
#include "ricci/resample.hpp"

using namespace ricci;

TEST_CASE("hyperbolic factor closed forms") {
    // the k = 1 exhaustion factor at the origin: both closed forms agree
    CHECK(hyperbolic_factor_at(0.0, 0.5, 1.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(exhaustion_factor_at(0.0, 1) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    // paper display h_k = ln[(2/(k+1)) / ((1-1/(k+1))^2 - |x|^2)]
    for (int k : {1, 2, 5, 24})
        for (double r : {0.0, 0.3, 0.55}) {
            if (r >= exhaustion_radius(k)) continue;
            const double direct =
                std::log((2.0 / (k + 1)) /
                         (std::pow(1.0 - 1.0 / (k + 1), 2) - r * r));
            CHECK(exhaustion_factor_at(r, k) == doctest::Approx(direct).epsilon(1e-13));
        }

    CHECK(hyperbolic_factor_at(0.0, 1.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // c = 1/(2t) with t = 1/2 collapses to the c = 1 case
    CHECK(hyperbolic_factor_at(0.4, 1.0, 1.0) ==
          doctest::Approx(bigbang_at(0.4, 0.5)).epsilon(1e-15));
}

TEST_CASE("expanding factor values and bigbang equivalences") {
    auto g = build_grid(1.0, 33, 1, 2.0, 0.05);
    CHECK(expanding_at(0.0, 1.0, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(expanding_at(0.0, 1.0, 1.0) ==
          doctest::Approx(std::log(2.0) + 0.5 * std::log(3.0)).epsilon(1e-15));

    const ScalarField bb = bigbang_factor(g, 0.5);
    const ScalarField hyp = hyperbolic_factor(g, 1.0, 1.0);
    CHECK(sup_diff(bb, hyp) == 0.0);
    const ScalarField ex0 = expanding_hyperbolic(g, 1.0, 0.0);
    CHECK(sup_diff(ex0, hyp) < 1e-15);

    CHECK_THROWS_AS(bigbang_factor(g, 0.0), DomainError);
    CHECK_THROWS_AS(bigbang_factor(g, -1.0), DomainError);
}

TEST_CASE("gauss curvature of the model metrics") {
    for (int nt : {1, 16}) {
        auto g = build_grid(1.0, 65, nt, 2.0, 0.05);

        // flat
        const ScalarField zero(g, 0.0);
        const ScalarField K0 = gauss_curvature(zero);
        for (std::size_t n = 0; n < g->interior_count(); ++n)
            CHECK(std::fabs(K0[n]) < 1e-12);

        // constant curvature -1
        const ScalarField K1 = gauss_curvature(hyperbolic_factor(g, 1.0, 1.0));
        for (std::size_t n = 0; n < g->interior_count(); ++n)
            CHECK(K1[n] == doctest::Approx(-1.0).epsilon(5e-3));

        // u = -|x|^2 has K = 4 e^{2 r^2}
        const ScalarField bump =
            ScalarField::from_function(g, [](double r, double) { return -r * r; });
        const ScalarField Kb = gauss_curvature(bump);
        for (std::size_t n = 0; n < g->interior_count(); ++n) {
            const double r = g->node_r(n);
            CHECK(Kb[n] == doctest::Approx(4.0 * std::exp(2.0 * r * r)).epsilon(5e-3));
        }
    }
}

TEST_CASE("curvature of hyperbolic factors converges at order 2") {
    for (auto [a, c] : {std::pair{1.0, 1.0}, std::pair{0.8, 2.0}, std::pair{1.0, 0.25}}) {
        double prev = 0.0;
        for (int n_r : {33, 65, 129}) {
            auto g = build_grid(std::min(a, 1.0), n_r, 1, 2.0, 0.05);
            const ScalarField K = gauss_curvature(hyperbolic_factor(g, a, c));
            double worst = 0.0;
            for (std::size_t n = 0; n < g->interior_count(); ++n)
                worst = std::max(worst, std::fabs(K[n] + c));
            if (prev > 0.0) CHECK(std::log2(prev / worst) > 1.8);
            prev = worst;
        }
    }
}

TEST_CASE("bigbang curvature is -1/(2t)") {
    auto g = build_grid(1.0, 65, 1, 2.0, 0.05);
    for (double t : {0.25, 0.5, 2.0}) {
        const ScalarField K = gauss_curvature(bigbang_factor(g, t));
        for (std::size_t n = 0; n < g->interior_count(); ++n)
            CHECK(K[n] == doctest::Approx(-1.0 / (2.0 * t)).epsilon(5e-3));
    }
}

TEST_CASE("cutoff psi: branches, values, properties") {
    const CutoffSpec spec{0.2};
    const double eta = spec.eta;
    CHECK(psi(-2 * eta, spec) == 0.0);
    CHECK(psi_prime(-2 * eta, spec) == 0.0);
    CHECK(psi(2 * eta, spec) == 2 * eta);
    CHECK(psi_prime(2 * eta, spec) == 1.0);
    CHECK(psi(0.0, spec) == doctest::Approx(eta / 4.0).epsilon(1e-15));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double prev_s = -1.0, prev_p = psi_prime(-1.0, spec);
    for (int i = 0; i < 2000; ++i) {
        const double s = d(rng);
        CHECK(psi(s, spec) >= s);            // psi(s) >= s
        CHECK(psi(s, spec) >= 0.0);          // psi(s) >= 0
        CHECK(psi_prime(s, spec) >= 0.0);
        CHECK(psi_prime(s, spec) <= 1.0);
        // C^1 continuity at the seams
        const double h = 1e-7;
        CHECK(std::fabs(psi(s + h, spec) - psi(s, spec) - h * psi_prime(s, spec)) < 1e-12);
        (void)prev_s;
        (void)prev_p;
    }
    // psi' monotone (psi convex): scan a grid
    double last = 0.0;
    for (double s = -0.5; s <= 0.5; s += 1e-3) {
        const double p = psi_prime(s, spec);
        CHECK(p >= last - 1e-15);
        last = p;
    }
}

TEST_CASE("smoothed max: branch exactness and proximity bounds") {
    const int k = 4;
    auto g = build_grid(exhaustion_radius(k), 65, 1, 2.0, 0.02);
    const SampleMetric u0 = sample_initial("restricted-hyperbolic:R=2.0", g);
    const CutoffSpec spec{0.1};
    const ScalarField ubar = smoothed_max_initial(u0.u, k, spec);

    for (std::size_t n = 0; n < g->node_count(); ++n) {
        const double r = g->node_r(n);
        const double hk = exhaustion_factor_at(r, k);
        const double s = hk - u0.u[n];
        if (s >= spec.eta) {
            CHECK(ubar[n] == doctest::Approx(hk).epsilon(1e-14)); // psi(s) = s branch
        } else if (s <= -spec.eta) {
            CHECK(ubar[n] == u0.u[n]); // psi = 0 branch
        }
        const double mx = std::max(u0.u[n], hk);
        CHECK(ubar[n] >= mx - 1e-15);
        CHECK(ubar[n] <= mx + spec.eta / 4.0 + 1e-15);
        CHECK(ubar[n] >= u0.u[n]);
        CHECK(ubar[n] >= hk - 1e-15);
    }
}

TEST_CASE("smoothed max: uniform curvature bound K <= -e^{-2 eta}") {
    const CutoffSpec spec{0.1};
    for (int k : {4, 8}) {
        for (int nt : {1, 32}) {
            auto g = build_grid(exhaustion_radius(k), 129, nt, 2.0, 0.02);
            const SampleMetric u0 = sample_initial("restricted-hyperbolic:R=2.0", g);
            const ScalarField ubar = smoothed_max_initial(u0.u, k, spec);
            const ScalarField K = gauss_curvature(ubar);
            const double bound = -std::exp(-2.0 * spec.eta);
            const double h = g->max_spacing_within(g->max_radius());
            for (std::size_t n = 0; n < g->interior_count(); ++n)
                CHECK(K[n] <= bound + 10.0 * h * h * (1.0 + std::fabs(K[n])));
        }
    }
}

TEST_CASE("smoothed max decreases in k") {
    const CutoffSpec spec{0.1};
    auto gref = build_grid(0.6, 65, 1, 1.0, 0.02);
    ScalarField prev(gref);
    bool first = true;
    for (int k : {2, 4, 8, 16}) {
        auto g = build_grid(exhaustion_radius(k), 129, 1, 2.0, 0.02);
        const SampleMetric u0 = sample_initial("restricted-hyperbolic:R=2.0", g);
        const ScalarField ubar = resample(smoothed_max_initial(u0.u, k, spec), gref);
        if (!first)
            for (std::size_t n = 0; n < ubar.size(); ++n)
                CHECK(ubar[n] <= prev[n] + 1e-6);
        prev = ubar;
        first = false;
    }
}

TEST_CASE("smoothed max rejects data violating K <= -1") {
    const int k = 4;
    auto g = build_grid(exhaustion_radius(k), 65, 1, 2.0, 0.02);
    const ScalarField flat(g, 0.0); // K = 0
    CHECK_THROWS_AS(smoothed_max_initial(flat, k, CutoffSpec{0.1}), PreconditionError);
}

TEST_CASE("sample corpus") {
    auto g = build_grid(1.0, 65, 1, 2.0, 0.02);

    const SampleMetric rh = sample_initial("restricted-hyperbolic:R=2.0", g);
    CHECK(rh.u[0] == doctest::Approx(0.0).epsilon(1e-15)); // ln(4/4) = 0
    CHECK(!rh.complete);
    const ScalarField Krh = gauss_curvature(rh.u);
    for (std::size_t n = 0; n < g->interior_count(); ++n)
        CHECK(Krh[n] == doctest::Approx(-1.0).epsilon(5e-3));

    const SampleMetric ch = sample_initial("complete-hyperbolic", g);
    CHECK(ch.complete);
    CHECK(sup_diff(ch.u, bigbang_factor(g, 0.5)) < 1e-14);

    const SampleMetric sf = sample_initial("scaled-flat-like:R=1.5,amp=0.3", g);
    CHECK(!sf.complete);
    const ScalarField Ksf = gauss_curvature(sf.u);
    const double h = g->max_spacing_within(g->max_radius());
    for (std::size_t n = 0; n < g->interior_count(); ++n)
        CHECK(Ksf[n] <= -1.0 + 10 * h * h * std::exp(-2.0 * sf.u[n]));

    CHECK_THROWS_AS(sample_initial("unknown-metric", g), ConfigError);
    CHECK_THROWS_AS(sample_initial("restricted-hyperbolic:R=0.5", g), ConfigError);
    CHECK_THROWS_AS(sample_initial("restricted-hyperbolic:bogus=1", g), ConfigError);
}
