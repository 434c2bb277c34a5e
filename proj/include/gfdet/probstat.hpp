// Scalar probability kernels: normal tails, binomial laws, chi-square CDFs.
#pragma once

namespace gfdet::probstat {

struct BinomialLaw {
    int trials_n = 0;        // n >= 0
    double success_p = 0.0;  // p in [0,1]
    void validate() const;
};

// P(N(0,1) > x). Throws std::invalid_argument on non-finite input.
double q_function(double x);

// Inverse of q_function on (0,1). Throws std::domain_error outside (0,1).
double q_inverse(double p);

// Standard normal lower tail P(N(0,1) <= x).
double normal_cdf(double x);

// P(X = k) for X ~ B(n,p). Out-of-range k yields 0 (not an error).
double binomial_pmf(const BinomialLaw& law, int k);

// Upper tail P(X >= m), exact summation. m <= 0 gives exactly 1.
double binomial_tail(const BinomialLaw& law, int m);

// Lower tail of a chi-square with `dof` degrees of freedom at x >= 0.
double chi_square_cdf(int dof, double x);

// Upper tail, computed directly (precise when small).
double chi_square_sf(int dof, double x);

// Regularized incomplete gamma P(a,x) and Q(a,x); exposed for test oracles.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace gfdet::probstat
