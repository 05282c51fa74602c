#include "hypstruct/lobachevsky.hpp"

#include <cmath>

#include "hypstruct/shapes.hpp"

namespace hyp {

namespace {

constexpr int kTerms = 30;

// c_k = 2 zeta(2k) / (2k (2k+1)), so that
// Cl2(x) = x - x log x + sum_k c_k x (x / 2pi)^{2k}  for 0 < x < 2pi.
struct ClausenTable {
    std::array<double, kTerms + 1> c{};
    ClausenTable() {
        for (int k = 1; k <= kTerms; ++k) {
            double zeta;
            if (k == 1) {
                zeta = kPi * kPi / 6.0;
            } else if (k == 2) {
                zeta = std::pow(kPi, 4) / 90.0;
            } else {
                zeta = 0.0;
                for (int n = 2000; n >= 1; --n) zeta += std::pow(double(n), -2.0 * k);
            }
            c[k] = 2.0 * zeta / (2.0 * k * (2.0 * k + 1.0));
        }
    }
};

const ClausenTable& table() {
    static const ClausenTable t;
    return t;
}

// Cl2 on [0, pi]
double clausen_reduced(double x) {
    if (x == 0.0) return 0.0;
    const auto& c = table().c;
    double q = x / (2.0 * kPi);
    q *= q;
    double sum = 0.0;
    double p = 1.0;
    for (int k = 1; k <= kTerms; ++k) {
        p *= q;
        double term = c[k] * p;
        sum += term;
        if (term < 1e-18 * std::abs(sum)) break;
    }
    return x - x * std::log(x) + x * sum;
}

}  // namespace

double lob(double theta) {
    if (!std::isfinite(theta)) return std::nan("");
    // pi-periodic and odd: fold into [0, pi/2]
    double t = std::fmod(theta, kPi);
    if (t < 0) t += kPi;
    double sign = 1.0;
    if (t > kPi / 2) {
        t = kPi - t;
        sign = -1.0;
    }
    return sign * 0.5 * clausen_reduced(2.0 * t);
}

bool AngleTriple::sums_to_pi(double tol) const {
    return std::abs(alpha + beta + gamma - kPi) <= tol;
}

bool AngleTriple::degenerate(double tol) const {
    for (double a : {alpha, beta, gamma}) {
        double r = std::fmod(std::abs(a), kPi);
        if (r <= tol || kPi - r <= tol) return true;
    }
    return false;
}

double tet_volume(const AngleTriple& a) {
    return lob(a.alpha) + lob(a.beta) + lob(a.gamma);
}

AngleTriple angles_of_shape(cplx z) {
    // edge 01 -> z, 02 -> z'' = (z-1)/z, 03 -> z' = 1/(1-z)
    AngleTriple a;
    a.alpha = std::arg(z);
    a.beta = std::arg((z - 1.0) / z);
    a.gamma = std::arg(1.0 / (1.0 - z));
    return a;
}

double tet_volume_z(cplx z) {
    if (z.imag() == 0.0) return 0.0;
    return tet_volume(angles_of_shape(z));
}

double total_volume(const std::vector<cplx>& z) {
    double v = 0.0;
    for (const auto& w : z) v += tet_volume_z(w);
    return v;
}

double total_volume(const ShapeAssignment& s) { return total_volume(s.z); }

}  // namespace hyp
