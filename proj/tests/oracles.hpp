#pragma once
// Independent reference computations used by the tests.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> x(n), w(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                x[i] = z;
                w[i] = 2 / ((1 - z * z) * dp * dp);
                break;
            }
        }
    }
    return {x, w};
}

// -int_0^theta log|2 sin u| du for theta in (0, pi]: the singular parts
// log(2u) + log((pi - u)/pi) are integrated exactly, the smooth remainder by
// composite Gauss-Legendre.
inline double lobachevsky_quadrature(double theta) {
    static const auto gl = gauss_legendre(40);
    if (theta == 0) return 0;
    double smooth = 0;
    const int panels = 16;
    const double h = theta / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = p * h;
        for (size_t k = 0; k < gl.first.size(); ++k) {
            const double u = a + 0.5 * h * (gl.first[k] + 1);
            smooth += 0.5 * h * gl.second[k] * std::log(pi * std::sin(u) / (u * (pi - u)));
        }
    }
    const double s = pi - theta;
    const double right = s > 0 ? -theta - s * std::log(s / pi) : -pi;
    return -(theta * std::log(2 * theta) - theta + right + smooth);
}

// Exact value of a_0 + 1/(a_1 + 1/(...)) as a reduced fraction (den >= 0).
struct Fraction {
    long long num = 0, den = 1;
};
inline Fraction cf_fraction(const std::vector<long>& a) {
    // convergent recurrences
    long long h1 = 1, h0 = 0, k1 = 0, k0 = 1;
    for (long x : a) {
        long long h = x * h1 + h0, k = x * k1 + k0;
        h0 = h1;
        h1 = h;
        k0 = k1;
        k1 = k;
    }
    long long g = std::gcd(h1, k1);
    if (g == 0) g = 1;
    Fraction f{h1 / g, k1 / g};
    if (f.den < 0) {
        f.num = -f.num;
        f.den = -f.den;
    }
    return f;
}

// Ridders' polynomial extrapolation of central differences; f must be defined on [-h0, h0]
template <class F>
double ridders_derivative(F f, double h0, double* err_out = nullptr) {
    constexpr int ntab = 10;
    constexpr double con = 1.4, con2 = con * con;
    double a[ntab][ntab];
    double h = h0, err = std::numeric_limits<double>::max(), ans = 0;
    a[0][0] = (f(h) - f(-h)) / (2 * h);
    for (int i = 1; i < ntab; ++i) {
        h /= con;
        a[0][i] = (f(h) - f(-h)) / (2 * h);
        double fac = con2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1);
            fac *= con2;
            const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (e <= err) {
                err = e;
                ans = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2 * err) break;
    }
    if (err_out) *err_out = err;
    return ans;
}

}  // namespace oracle
