#include "umdlab/decomp.hpp"

#include <cmath>
#include <stdexcept>

#include "umdlab/quadrature.hpp"

namespace umdlab {

cplx CircleFunction::eval(double phi) const {
    cplx acc(0.0, 0.0);
    for (int k = -degree; k <= degree; ++k) acc += c(k) * std::polar(1.0, k * phi);
    return acc;
}

double CircleFunction::derivative_real(double phi, int order) const {
    cplx acc(0.0, 0.0);
    for (int k = -degree; k <= degree; ++k) {
        cplx ik = std::pow(cplx(0.0, static_cast<double>(k)), order);
        acc += c(k) * ik * std::polar(1.0, k * phi);
    }
    return acc.real();
}

double CircleFunction::max_imag_violation() const {
    double m = 0.0;
    for (int k = 0; k <= degree; ++k) m = std::max(m, std::abs(c(-k) - std::conj(c(k))));
    return m;
}

bool CircleFunction::even_only(double tol) const {
    for (int k = -degree; k <= degree; ++k)
        if (k % 2 != 0 && std::abs(c(k)) > tol) return false;
    return true;
}

bool CircleFunction::odd_only(double tol) const {
    for (int k = -degree; k <= degree; ++k)
        if (k % 2 == 0 && std::abs(c(k)) > tol) return false;
    return true;
}

double CircleFunction::l2_norm() const {
    double s = 0.0;
    for (const cplx& v : coef) s += std::norm(v);
    return std::sqrt(s);
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& o) {
    if (o.degree > degree) throw std::invalid_argument("CircleFunction += : degree mismatch");
    for (int k = -o.degree; k <= o.degree; ++k) c(k) += o.c(k);
    return *this;
}

CircleFunction CircleFunction::scaled(double s) const {
    CircleFunction out = *this;
    for (cplx& v : out.coef) v *= s;
    return out;
}

CircleFunction restrict_to_circle(const Multiplier& m, int k_max, double* residual) {
    if (m.dim != 2) throw std::invalid_argument("restrict_to_circle: d = 2 symbols only");
    const int samples = std::max(1024, 8 * k_max);
    std::vector<cplx> vals(samples);
    double power = 0.0;
    for (int j = 0; j < samples; ++j) {
        double phi = 2.0 * M_PI * j / samples;
        double xi[2] = {std::cos(phi), std::sin(phi)};
        vals[j] = m.symbol(xi);
        power += std::norm(vals[j]);
    }
    power /= samples;
    CircleFunction out(k_max);
    double captured = 0.0;
    for (int k = -k_max; k <= k_max; ++k) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < samples; ++j)
            acc += vals[j] * std::polar(1.0, -k * 2.0 * M_PI * j / samples);
        acc /= static_cast<double>(samples);
        out.c(k) = acc;
        captured += std::norm(acc);
    }
    if (residual) *residual = std::sqrt(std::max(0.0, power - captured));
    return out;
}

double lambda_k(int k, double eps, int d) {
    if (k < 0) throw std::invalid_argument("lambda_k: k must be >= 0");
    if (!(eps > 0.0)) throw std::invalid_argument("lambda_k: eps must be > 0");
    if (d < 2) throw std::invalid_argument("lambda_k: d must be >= 2");
    const double omega = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); // |S^{d-1}|
    const double c0 = 2.0 * omega *
                      std::exp(std::lgamma(eps + 1.0) + std::lgamma(0.5 * d) -
                               std::lgamma(0.5 * d + eps));
    auto integrand = [&](double r) {
        double r2 = 1.0 + r * r;
        return std::pow(r2, 0.5 * d - 2.0) *
               std::pow((1.0 - r) * (1.0 - r) / r2, 0.5 * d - 1.0 + eps) * std::pow(r, k);
    };
    return c0 * integrate_tanh_sinh01(integrand, 1e-12);
}

EvenDecomposition even_decompose(const Multiplier& m, double eps, int k_max) {
    if (m.parity != Parity::EvenReal)
        throw std::domain_error("even_decompose: even-real symbols only");
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("even_decompose: eps in (0,1]");
    EvenDecomposition dec;
    dec.eps = eps;
    dec.degree = k_max;
    CircleFunction restriction = restrict_to_circle(m, k_max, &dec.truncation_residual);
    if (restriction.max_imag_violation() > 1e-10)
        throw std::domain_error("even_decompose: restriction is not real");
    dec.lambda.assign(k_max + 1, 0.0);
    dec.density = CircleFunction(k_max);
    for (int k = 0; k <= k_max; k += 2) {
        dec.lambda[k] = lambda_k(k, eps, 2);
        dec.density.c(k) = restriction.c(k) / dec.lambda[k];
        if (k > 0) dec.density.c(-k) = restriction.c(-k) / dec.lambda[k];
    }
    // odd bands of an even symbol vanish; anything visible there is noise
    for (int k = -k_max; k <= k_max; ++k)
        if (k % 2 != 0 && std::abs(restriction.c(k)) > 1e-8)
            throw std::domain_error("even_decompose: odd harmonic content in an even symbol");
    return dec;
}

double even_reconstruct_pointwise(const EvenDecomposition& dec, const double* xi,
                                  int a_nodes, int theta_nodes) {
    const double phi_xi = std::atan2(xi[1], xi[0]);
    const double eps = dec.eps;
    QuadRule gl = gauss_legendre(a_nodes, 0.0, 1.0);
    // density values on the theta grid (surface measure on S^1)
    std::vector<double> fv(theta_nodes), cosd(theta_nodes);
    const double dtheta = 2.0 * M_PI / theta_nodes;
    for (int j = 0; j < theta_nodes; ++j) {
        double psi = j * dtheta;
        fv[j] = dec.density.eval_real(psi);
        double cv = std::cos(psi - phi_xi);
        cosd[j] = cv * cv;
    }
    double total = 0.0;
    for (int i = 0; i < a_nodes; ++i) {
        double s = gl.nodes[i];
        double a = 1.0 - std::pow(s, 1.0 / eps);
        double a2 = a * a;
        double inner = 0.0;
        for (int j = 0; j < theta_nodes; ++j) inner += fv[j] * (1.0 - a) / (1.0 - a2 * cosd[j]);
        total += gl.weights[i] * inner * dtheta / eps;
    }
    return total;
}

double poisson_kernel_sym(double r, const double* xi, const double* theta, int d) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("poisson_kernel_sym: r must be in (0,1)");
    const double omega = 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
    double dot = 0.0;
    for (int i = 0; i < d; ++i) dot += xi[i] * theta[i];
    double base = 1.0 + r * r;
    double plus = (1.0 - r * r) / (omega * std::pow(base - 2.0 * r * dot, 0.5 * d));
    double minus = (1.0 - r * r) / (omega * std::pow(base + 2.0 * r * dot, 0.5 * d));
    return 0.5 * (plus + minus);
}

CircleFunction rotations_decompose_odd_2d(const Multiplier& m, int k_max) {
    if (m.parity != Parity::OddImaginary)
        throw std::domain_error("rotations_decompose_odd_2d: odd-imaginary symbols only");
    if (m.dim != 2) throw std::invalid_argument("rotations_decompose_odd_2d: d = 2 only");
    double residual = 0.0;
    CircleFunction restriction = restrict_to_circle(m, k_max, &residual);
    // g = i * m is real with odd harmonics only
    CircleFunction g(k_max);
    for (int k = -k_max; k <= k_max; ++k) g.c(k) = cplx(0.0, 1.0) * restriction.c(k);
    if (g.max_imag_violation() > 1e-9)
        throw std::domain_error("rotations_decompose_odd_2d: symbol is not odd-imaginary");
    CircleFunction omega(k_max);
    for (int h = 1; h <= k_max; h += 2) {
        // diagonal factor of sgn(cos .): 4 (-1)^{(h-1)/2} / h per harmonic h
        double factor = 4.0 * (((h - 1) / 2) % 2 == 0 ? 1.0 : -1.0) / h;
        omega.c(h) = g.c(h) / factor;
        omega.c(-h) = g.c(-h) / factor;
    }
    return omega;
}

GridFunction directional_hilbert(const double* theta_unit, const GridFunction& f) {
    if (f.dim() != 2) throw std::invalid_argument("directional_hilbert: d = 2 only");
    double t0 = theta_unit[0], t1 = theta_unit[1];
    GridFunction g = f;
    g.apply_symbol(
        [&](const int* k) {
            double dot = k[0] * t0 + k[1] * t1;
            double scale = std::sqrt(static_cast<double>(k[0]) * k[0] +
                                     static_cast<double>(k[1]) * k[1]);
            if (std::abs(dot) <= 1e-12 * scale) return cplx(0.0, 0.0);
            return cplx(0.0, dot > 0 ? -1.0 : 1.0);
        },
        cplx(0.0, 0.0));
    return g;
}

namespace {

double bernoulli_poly(int r, double u) {
    switch (r) {
        case 1: return u - 0.5;
        case 2: return u * u - u + 1.0 / 6.0;
        case 3: return u * (u * (u - 1.5) + 0.5);
        case 4: return u * u * (u * u - 2.0 * u + 1.0) - 1.0 / 30.0;
        default: throw std::logic_error("bernoulli_poly: unsupported order");
    }
}

// I = T + sum_{r>=1} ((-h)^r / r!) sum_m B_r(u_m) dF^{(r-1)}(y_m) + O(h^5)
double jump_correction(const CircleFunction& omega, double y, double jump_sign, double h) {
    double u = y / h - std::floor(y / h);
    double corr = 0.0;
    double hr = 1.0;
    double fact = 1.0;
    for (int r = 1; r <= 4; ++r) {
        hr *= -h;
        fact *= r;
        double br = bernoulli_poly(r, u);
        if (r == 1 && (u < 1e-12 || u > 1.0 - 1e-12)) br = 0.0; // node-at-jump midpoint rule
        corr += (hr / fact) * br * 2.0 * jump_sign * omega.derivative_real(y, r - 1);
    }
    return corr;
}

} // namespace

namespace {

// trapezoid over precomputed Omega samples plus the two jump corrections
double weight_from_samples(const CircleFunction& omega, const std::vector<double>& samples,
                           double cphi, double sphi, double phi_k, int theta_nodes) {
    const double h = 2.0 * M_PI / theta_nodes;
    double acc = 0.0;
    for (int j = 0; j < theta_nodes; ++j) {
        double psi = j * h;
        // sign of cos(psi - phi_k) without trigonometry per (j,k)
        double cv = std::cos(psi) * cphi + std::sin(psi) * sphi;
        if (std::abs(cv) <= 1e-12) continue;
        acc += cv > 0 ? samples[j] : -samples[j];
    }
    double t = acc * h;
    auto wrap = [](double x) {
        x = std::fmod(x, 2.0 * M_PI);
        return x < 0 ? x + 2.0 * M_PI : x;
    };
    t += jump_correction(omega, wrap(phi_k - M_PI_2), +1.0, h);
    t += jump_correction(omega, wrap(phi_k + M_PI_2), -1.0, h);
    return t;
}

} // namespace

double rotations_mode_weight(const CircleFunction& omega, double phi_k, int theta_nodes) {
    std::vector<double> samples(theta_nodes);
    for (int j = 0; j < theta_nodes; ++j)
        samples[j] = omega.eval_real(2.0 * M_PI * j / theta_nodes);
    return weight_from_samples(omega, samples, std::cos(phi_k), std::sin(phi_k), phi_k,
                               theta_nodes);
}

GridFunction rotations_reconstruct(const CircleFunction& omega, const GridFunction& f,
                                   int theta_nodes) {
    if (f.dim() != 2) throw std::invalid_argument("rotations_reconstruct: d = 2 only");
    if (theta_nodes < 8) throw std::invalid_argument("rotations_reconstruct: too few nodes");
    std::vector<double> samples(theta_nodes);
    for (int j = 0; j < theta_nodes; ++j)
        samples[j] = omega.eval_real(2.0 * M_PI * j / theta_nodes);
    GridFunction g = f;
    g.apply_symbol(
        [&](const int* k) {
            double kn = std::sqrt(static_cast<double>(k[0]) * k[0] +
                                  static_cast<double>(k[1]) * k[1]);
            double phi = std::atan2(static_cast<double>(k[1]), static_cast<double>(k[0]));
            double w = weight_from_samples(omega, samples, k[0] / kn, k[1] / kn, phi,
                                           theta_nodes);
            return cplx(0.0, -1.0) * w;
        },
        cplx(0.0, 0.0));
    return g;
}

} // namespace umdlab
