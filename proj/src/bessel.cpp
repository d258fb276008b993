#include "jos/bessel.hpp"

#include <cmath>
#include <vector>

#include "jos/errors.hpp"

namespace jos {

namespace {

double bessel_series(int n, double x) {
    // sum_m (-1)^m (x/2)^{n+2m} / (m! (n+m)!)
    const double hx = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= hx / k;  // (x/2)^n / n!
    double sum = term;
    const double x2 = -hx * hx;
    for (int m = 1; m < 400; ++m) {
        term *= x2 / (double(m) * (n + m));
        sum += term;
        if (std::abs(term) < 1e-17 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

double bessel_miller(int n, double x) {
    // downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized by
    // J_0 + 2 J_2 + 2 J_4 + ... = 1
    const int start = n + 16 +
                      static_cast<int>(x + 12.0 * std::sqrt(std::max(double(n), x) + 1.0));
    double jp = 0.0, jc = 1e-300;
    double result = (n >= start) ? jc : 0.0;
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        const double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 == n) result = jc;
        if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jc : 2.0 * jc;
        // rescale to avoid overflow
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
    }
    return result / norm;
}

}  // namespace

double bessel_j(int n, double x) {
    if (!std::isfinite(x)) throw domain_error("bessel_j: non-finite argument");
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2) sign = -sign;
    }
    if (x == 0.0) return n == 0 ? sign : 0.0;
    if (x <= 12.0) return sign * bessel_series(n, x);
    return sign * bessel_miller(n, x);
}

}  // namespace jos
