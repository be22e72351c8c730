#include "cams/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cams/core.hpp"

namespace cams {

double cosine_sim(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw Error("cosine_sim: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw Error("cosine_sim: zero-norm input");
    double s = dot / (std::sqrt(nu) * std::sqrt(nv));
    return std::clamp(s, -1.0, 1.0);
}

Vector mean_vector(const std::vector<Vector>& vs) {
    if (vs.empty()) throw Error("mean_vector: empty list");
    const std::size_t dim = vs.front().size();
    Vector out(dim, 0.0);
    for (auto& v : vs) {
        if (v.size() != dim) throw Error("mean_vector: dimension mismatch");
        for (std::size_t i = 0; i < dim; ++i) out[i] += v[i];
    }
    for (auto& x : out) x /= static_cast<double>(vs.size());
    return out;
}

double sq_euclidean(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw Error("sq_euclidean: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double d = u[i] - v[i];
        s += d * d;
    }
    return s;
}

namespace {

// Series expansion of P(a, x), valid and fast for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error("regularized_gamma_p: invalid arguments");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double chi2_upper_quantile(double tail_prob, int df) {
    if (!(tail_prob > 0.0 && tail_prob < 1.0))
        throw Error("chi2_upper_quantile: tail_prob out of (0,1)");
    if (df < 1) throw Error("chi2_upper_quantile: df must be >= 1");

    const double a = 0.5 * df;
    const double target = 1.0 - tail_prob;  // lower CDF value at the quantile
    auto cdf = [a](double x) { return regularized_gamma_p(a, 0.5 * x); };

    // Bracket the root, then bisect.
    double lo = 0.0;
    double hi = std::max(4.0 * df, 16.0);
    int guard = 0;
    while (cdf(hi) < target) {
        hi *= 2.0;
        if (++guard > 200) throw Error("chi2_upper_quantile: bracketing failed");
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        if (cdf(x) < target)
            lo = x;
        else
            hi = x;
        x = 0.5 * (lo + hi);
        if (hi - lo < 1e-13 * std::max(1.0, x)) break;
    }

    // Newton polish: pdf(x) = x^(a-1) e^(-x/2) / (2^a Gamma(a)).
    for (int i = 0; i < 8; ++i) {
        double f = cdf(x) - target;
        double logpdf = (a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a);
        double pdf = std::exp(logpdf);
        if (pdf <= 0.0) break;
        double step = f / pdf;
        double nx = x - step;
        if (nx <= lo || nx >= hi) break;
        x = nx;
        if (std::fabs(f) < 1e-12) break;
    }
    if (std::fabs(cdf(x) - target) > 1e-10)
        throw Error("chi2_upper_quantile: did not converge");
    return x;
}

}  // namespace cams
