#include <algorithm>
#include <cmath>
#include <numeric>

#include "evalforge/special_functions.hpp"
#include "evalforge/stats.hpp"

namespace evalforge {

namespace {

double polyval(const double* coefs, int order, double x) {
    // coefs[0] + coefs[1]*x + ... + coefs[order-1]*x^(order-1)
    double value = coefs[order - 1];
    for (int i = order - 2; i >= 0; --i) value = value * x + coefs[i];
    return value;
}

}  // namespace

/// Shapiro-Wilk W and p-value following Royston's 1995 algorithm (the
/// AS R94 coefficient fits), valid for 3 <= n <= 5000.
NormalityResult normality_check(const std::vector<double>& samples) {
    NormalityResult result;
    const std::size_t n = samples.size();
    if (n < 3 || n > 5000) return result;

    std::vector<double> x = samples;
    std::sort(x.begin(), x.end());
    if (x.front() == x.back()) return result;

    const double nn = static_cast<double>(n);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = normal_ppf((static_cast<double>(i) + 1.0 - 0.375) / (nn + 0.25));
    double m_ss = 0.0;
    for (double v : m) m_ss += v * v;

    std::vector<double> a(n);
    const double rsn = 1.0 / std::sqrt(nn);
    if (n == 3) {
        a[0] = -std::sqrt(0.5);
        a[1] = 0.0;
        a[2] = std::sqrt(0.5);
    } else {
        static constexpr double c1[6] = {0.0,       0.221157,  -0.147981,
                                         -2.071190, 4.434685,  -2.706056};
        static constexpr double c2[6] = {0.0,       0.042981,  -0.293762,
                                         -1.752461, 5.682633,  -3.582633};
        const double scale = std::sqrt(m_ss);
        const double a_n = m[n - 1] / scale + polyval(c1, 6, rsn);
        double phi;
        if (n > 5) {
            const double a_n1 = m[n - 2] / scale + polyval(c2, 6, rsn);
            phi = (m_ss - 2.0 * m[n - 1] * m[n - 1] - 2.0 * m[n - 2] * m[n - 2]) /
                  (1.0 - 2.0 * a_n * a_n - 2.0 * a_n1 * a_n1);
            a[n - 1] = a_n;
            a[n - 2] = a_n1;
            a[0] = -a_n;
            a[1] = -a_n1;
            for (std::size_t i = 2; i < n - 2; ++i) a[i] = m[i] / std::sqrt(phi);
        } else {
            phi = (m_ss - 2.0 * m[n - 1] * m[n - 1]) / (1.0 - 2.0 * a_n * a_n);
            a[n - 1] = a_n;
            a[0] = -a_n;
            for (std::size_t i = 1; i < n - 1; ++i) a[i] = m[i] / std::sqrt(phi);
        }
    }

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / nn;
    double numerator = 0.0, sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        numerator += a[i] * x[i];
        sse += (x[i] - mean) * (x[i] - mean);
    }
    double w = numerator * numerator / sse;
    w = std::min(w, 1.0);
    result.w = w;
    result.available = true;

    if (n == 3) {
        const double pi6 = 6.0 / M_PI;
        const double stqr = std::asin(std::sqrt(0.75));
        double p = pi6 * (std::asin(std::sqrt(w)) - stqr);
        result.p_value = std::clamp(p, 0.0, 1.0);
    } else if (n <= 11) {
        const double gamma = -2.273 + 0.459 * nn;
        const double lw = -std::log(gamma - std::log1p(-w));
        static constexpr double cm[4] = {0.5440, -0.39978, 0.025054, -0.0006714};
        static constexpr double cs[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double mu = polyval(cm, 4, nn);
        const double sigma = std::exp(polyval(cs, 4, nn));
        result.p_value = 1.0 - normal_cdf((lw - mu) / sigma);
    } else {
        const double lw = std::log1p(-w);
        const double ln_n = std::log(nn);
        static constexpr double cm[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
        static constexpr double cs[3] = {-0.4803, -0.082676, 0.0030302};
        const double mu = polyval(cm, 4, ln_n);
        const double sigma = std::exp(polyval(cs, 3, ln_n));
        result.p_value = 1.0 - normal_cdf((lw - mu) / sigma);
    }

    result.is_normal = !(result.p_value < 0.05);
    return result;
}

}  // namespace evalforge
