#ifndef CAMS_NUMERICS_HPP
#define CAMS_NUMERICS_HPP

#include <vector>

namespace cams {

using Vector = std::vector<double>;

// Cosine similarity, clamped into [-1, 1] against rounding. Throws on
// dimension mismatch or zero-norm input.
double cosine_sim(const Vector& u, const Vector& v);

// Componentwise arithmetic mean of a non-empty list.
Vector mean_vector(const std::vector<Vector>& vs);

// Squared Euclidean distance.
double sq_euclidean(const Vector& u, const Vector& v);

// Regularized lower incomplete gamma P(a, x): series for x < a+1, continued
// fraction otherwise.
double regularized_gamma_p(double a, double x);

// Upper-tail chi-squared quantile: x with P(X > x) = tail_prob, X ~ chi2(df).
// Bracketing bisection refined by Newton on the CDF; |CDF residual| <= 1e-10.
double chi2_upper_quantile(double tail_prob, int df);

}  // namespace cams

#endif
