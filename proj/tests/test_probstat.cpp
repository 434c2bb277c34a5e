#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gfdet/probstat.hpp"
#include "test_oracles.hpp"

using namespace gfdet::probstat;

TEST_CASE("q_function reference values") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // High-precision erfc oracle: Q(1.2815515655) = 0.10000000000782...
    CHECK(std::fabs(q_function(1.2815515655) - 0.1) < 1e-9);
    const double far = q_function(40.0);
    CHECK(far >= 0.0);
    CHECK(far < 1e-300);
    CHECK_THROWS_AS(q_function(std::nan("")), std::invalid_argument);
}

TEST_CASE("q_function symmetry") {
    for (double x = -8.0; x <= 8.0; x += 0.173) {
        CHECK(std::fabs(q_function(x) + q_function(-x) - 1.0) < 1e-12);
    }
}

TEST_CASE("q_inverse reference values and round trips") {
    CHECK(std::fabs(q_inverse(0.5)) < 1e-12);
    CHECK(q_inverse(0.1) == doctest::Approx(1.2815515655446004).epsilon(1e-8));
    for (double p : {1e-6, 0.01, 0.25, 0.75, 0.999}) {
        const double x = q_inverse(p);
        CHECK(q_function(x) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK_THROWS_AS(q_inverse(0.0), std::domain_error);
    CHECK_THROWS_AS(q_inverse(1.0), std::domain_error);
    CHECK_THROWS_AS(q_inverse(-0.3), std::domain_error);
}

TEST_CASE("binomial pmf basics") {
    CHECK(binomial_pmf({2, 0.5}, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(binomial_pmf({0, 0.3}, 0) == 1.0);
    CHECK(binomial_pmf({5, 0.4}, -1) == 0.0);
    CHECK(binomial_pmf({5, 0.4}, 6) == 0.0);
    CHECK_THROWS_AS(binomial_pmf({-1, 0.4}, 0), std::invalid_argument);
    CHECK_THROWS_AS(binomial_pmf({5, 1.4}, 0), std::invalid_argument);
}

TEST_CASE("binomial pmf at scale matches the extended-precision oracle") {
    // Frozen from an arbitrary-precision evaluation.
    CHECK(binomial_pmf({4846, 0.1}, 485) ==
          doctest::Approx(0.019088981825820570).epsilon(1e-10));
    for (int k : {0, 100, 485, 600, 2000}) {
        const double expected = static_cast<double>(test_oracle::binomial_pmf_ld(4846, 0.1L, k));
        CHECK(binomial_pmf({4846, 0.1}, k) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("binomial pmf sums to one") {
    for (const BinomialLaw& law : {BinomialLaw{10, 0.3}, BinomialLaw{123, 0.71},
                                   BinomialLaw{4846, 0.1}}) {
        // Compensated accumulation so the check measures PMF accuracy, not
        // the test's own summation roundoff.
        double sum = 0.0, comp = 0.0;
        for (int k = 0; k <= law.trials_n; ++k) {
            const double term = binomial_pmf(law, k);
            const double t = sum + term;
            comp += (sum >= term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
        CHECK(std::fabs(sum + comp - 1.0) < 1e-12);
    }
}

TEST_CASE("binomial tail") {
    CHECK(binomial_tail({5, 1.0}, 5) == 1.0);
    CHECK(binomial_tail({5, 0.0}, 1) == 0.0);
    CHECK(binomial_tail({17, 0.42}, 0) == 1.0);
    const double paper_point = binomial_tail({4846, 0.1}, 512);
    CHECK(paper_point > 0.09);
    CHECK(paper_point < 0.10);
    CHECK(paper_point ==
          doctest::Approx(static_cast<double>(test_oracle::binomial_tail_ld(4846, 0.1L, 512)))
              .epsilon(1e-10));
    // Frozen from an arbitrary-precision evaluation.
    CHECK(paper_point == doctest::Approx(0.099564508553671636).epsilon(1e-10));
    double prev = 1.0;
    for (int m = 0; m <= 18; ++m) {
        const double tail = binomial_tail({17, 0.42}, m);
        CHECK(tail <= prev + 1e-15);
        CHECK(tail >= 0.0);
        CHECK(tail <= 1.0);
        prev = tail;
    }
}

TEST_CASE("chi-square CDF closed forms and oracle values") {
    CHECK(chi_square_cdf(2, 2.0 * std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi_square_cdf(2, 0.0) == 0.0);
    // chi^2 with 2 DoF: F(x) = 1 - exp(-x/2).
    for (double x : {0.1, 1.0, 3.7, 12.0}) {
        CHECK(chi_square_cdf(2, x) == doctest::Approx(1.0 - std::exp(-0.5 * x)).epsilon(1e-12));
    }
    // Frozen from an arbitrary-precision incomplete-gamma evaluation.
    CHECK(chi_square_cdf(256, 256.0) == doctest::Approx(0.51175445090412290).epsilon(1e-10));
    CHECK(chi_square_sf(128, 128.0) == doctest::Approx(0.48337601249617350).epsilon(1e-10));
    CHECK_THROWS_AS(chi_square_cdf(2, -1.0), std::domain_error);
    CHECK_THROWS_AS(chi_square_cdf(0, 1.0), std::invalid_argument);
}

TEST_CASE("chi-square CDF is monotone and complements its survival function") {
    for (int dof : {2, 16, 256, 4096}) {
        double prev = -1.0;
        for (double x = 0.0; x <= 2.5 * dof; x += 0.11 * dof + 0.5) {
            const double cdf = chi_square_cdf(dof, x);
            CHECK(cdf >= prev);
            CHECK(std::fabs(cdf + chi_square_sf(dof, x) - 1.0) < 1e-12);
            prev = cdf;
        }
    }
}

TEST_CASE("chi-square converges to the Gaussian limit at 2M = 1024 DoF") {
    const int dof = 1024;  // M = 512
    const double spread = std::sqrt(2.0 * dof);
    double worst = 0.0;
    for (double z = -6.0; z <= 6.0; z += 0.01) {
        const double x = dof + z * spread;
        if (x < 0.0) continue;
        const double gap = std::fabs(chi_square_cdf(dof, x) - normal_cdf(z));
        if (gap > worst) worst = gap;
    }
    CHECK(worst < 0.02);
}
