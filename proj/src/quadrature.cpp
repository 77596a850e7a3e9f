#include "umdlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace umdlab {

QuadRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on the Legendre recurrence.
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.nodes[i] = xm - xl * z;
        rule.nodes[n - 1 - i] = xm + xl * z;
        rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

QuadRule gauss_hermite_normal(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n must be >= 1");
    // Orthonormal physicists' Hermite recurrence (weight exp(-x^2)),
    // nodes/weights then rescaled to the standard normal measure.
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pim4 = 0.7511255444649425; // pi^{-1/4}
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * rule.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * rule.nodes[1];
        } else {
            z = 2.0 * z - rule.nodes[i - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-14) break;
        }
        rule.nodes[i] = z;                     // storing descending positive roots first
        rule.nodes[n - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    const double sqrt2 = std::sqrt(2.0);
    const double invsqrtpi = 1.0 / std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] *= sqrt2;
        rule.weights[i] *= invsqrtpi;
    }
    return rule;
}

double integrate_tanh_sinh01(const std::function<double(double)>& f,
                             double rel_tol, int max_level) {
    // x(t) = (1 + tanh((pi/2) sinh t)) / 2 on (0,1).
    const double tmax = 6.1; // weights below ~1e-280 past this point
    auto eval = [&](double t, double& x, double& w) {
        double s = M_PI_2 * std::sinh(t);
        double c = std::cosh(s);
        x = 0.5 * (1.0 + std::tanh(s));
        w = M_PI_4 * std::cosh(t) / (c * c);
    };
    double h = 1.0;
    double x, w;
    eval(0.0, x, w);
    double sum = w * f(x);
    double prev = 0.0;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        // new points at odd multiples of h
        for (double t = h; t <= tmax; t += 2.0 * h) {
            eval(t, x, w);
            if (x > 0.0 && x < 1.0) add += w * f(x);
            eval(-t, x, w);
            if (x > 0.0 && x < 1.0) add += w * f(x);
        }
        prev = sum * (2.0 * h); // value at previous level (step 2h)
        sum += add;
        double cur = sum * h;
        if (level >= 4 && std::abs(cur - prev) <= rel_tol * std::abs(cur)) {
            return cur;
        }
    }
    return sum * h;
}

double integrate_graded_panels(const std::function<double(double)>& f,
                               double T, int panels, int nodes) {
    if (T <= 0.0) return 0.0;
    double total = 0.0;
    double right = T;
    for (int p = 0; p < panels; ++p) {
        double left = (p + 1 == panels) ? 0.0 : right * 0.5;
        QuadRule rule = gauss_legendre(nodes, left, right);
        for (int i = 0; i < nodes; ++i) total += rule.weights[i] * f(rule.nodes[i]);
        right = left;
    }
    return total;
}

} // namespace umdlab
