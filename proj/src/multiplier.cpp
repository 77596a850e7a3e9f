#include "umdlab/multiplier.hpp"

#include <cmath>
#include <stdexcept>

#include "umdlab/quadrature.hpp"
#include "umdlab/rng.hpp"

namespace umdlab {

namespace {

double norm2(const double* xi, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += xi[i] * xi[i];
    return s;
}

Multiplier finalize(Multiplier m) {
    validate_multiplier(m);
    m.zero_value = sphere_average(m);
    return m;
}

} // namespace

Multiplier make_hilbert_1d() {
    Multiplier m;
    m.dim = 1;
    m.parity = Parity::OddImaginary;
    m.name = "hilbert";
    m.symbol = [](const double* xi) {
        double s = xi[0] > 0.0 ? 1.0 : (xi[0] < 0.0 ? -1.0 : 0.0);
        return cplx(0.0, -s);
    };
    m.zero_value = 0.0; // S^0 average of an odd symbol
    validate_multiplier(m);
    return m;
}

Multiplier make_riesz(int k, int d) {
    if (d < 2 || d > 3) throw std::invalid_argument("riesz: d must be 2 or 3");
    if (k < 1 || k > d) throw std::invalid_argument("riesz: component k must satisfy 1 <= k <= d");
    Multiplier m;
    m.dim = d;
    m.parity = Parity::OddImaginary;
    m.name = "riesz" + std::to_string(k);
    m.symbol = [k, d](const double* xi) {
        // xi_k / (i |xi|) = -i xi_k / |xi|
        return cplx(0.0, -xi[k - 1] / std::sqrt(norm2(xi, d)));
    };
    return finalize(m);
}

Multiplier make_m0(int d) {
    if (d < 2 || d > 3) throw std::invalid_argument("m0: d must be 2 or 3");
    Multiplier m;
    m.dim = d;
    m.parity = Parity::EvenReal;
    m.name = "m0";
    m.symbol = [d](const double* xi) {
        return cplx(2.0 * xi[0] * xi[0] / norm2(xi, d) - 1.0, 0.0);
    };
    return finalize(m);
}

Multiplier make_ba_real() {
    Multiplier m = make_m0(2);
    m.name = "ba_real";
    return m;
}

Multiplier make_ba_imag() {
    Multiplier m;
    m.dim = 2;
    m.parity = Parity::EvenReal;
    m.name = "ba_imag";
    m.symbol = [](const double* xi) {
        return cplx(2.0 * xi[0] * xi[1] / norm2(xi, 2), 0.0);
    };
    return finalize(m);
}

Multiplier make_constant(double c, int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("constant: d must be 1, 2, or 3");
    Multiplier m;
    m.dim = d;
    m.parity = Parity::EvenReal;
    m.name = "const";
    m.symbol = [c](const double*) { return cplx(c, 0.0); };
    m.zero_value = c;
    validate_multiplier(m);
    return m;
}

Multiplier make_m_a_theta(double a, const std::vector<double>& theta, int d) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("m_a_theta: a must lie in (0,1)");
    if (static_cast<int>(theta.size()) != d) throw std::invalid_argument("m_a_theta: theta dimension mismatch");
    double tn = 0.0;
    for (double t : theta) tn += t * t;
    if (std::abs(std::sqrt(tn) - 1.0) > 1e-10)
        throw std::invalid_argument("m_a_theta: theta must be a unit vector");
    if (d < 2 || d > 3) throw std::invalid_argument("m_a_theta: d must be 2 or 3");
    Multiplier m;
    m.dim = d;
    m.parity = Parity::EvenReal;
    m.name = "m_a_theta";
    std::vector<double> th = theta;
    m.symbol = [a, th, d](const double* xi) {
        double dot = 0.0;
        for (int i = 0; i < d; ++i) dot += xi[i] * th[i];
        double t2 = dot * dot / norm2(xi, d); // <xi/|xi|, theta>^2
        // (1-a) sum a^{2j} t^{2j} summed in closed form
        return cplx((1.0 - a) / (1.0 - a * a * t2), 0.0);
    };
    return finalize(m);
}

Multiplier make_named_multiplier(const std::string& name, int d) {
    if (name == "hilbert") return make_hilbert_1d();
    if (name == "m0") return make_m0(d);
    if (name == "ba_real") return make_ba_real();
    if (name == "ba_imag") return make_ba_imag();
    if (name.rfind("riesz", 0) == 0 && name.size() == 6)
        return make_riesz(name[5] - '0', d);
    if (name.rfind("const:", 0) == 0)
        return make_constant(std::stod(name.substr(6)), d);
    throw std::invalid_argument("unknown multiplier name: " + name);
}

double sphere_average(const Multiplier& m) {
    cplx acc(0.0, 0.0);
    if (m.dim == 1) {
        double xp = 1.0, xm = -1.0;
        acc = 0.5 * (m.symbol(&xp) + m.symbol(&xm));
    } else if (m.dim == 2) {
        const int nphi = 512;
        for (int i = 0; i < nphi; ++i) {
            double phi = 2.0 * M_PI * i / nphi;
            double xi[2] = {std::cos(phi), std::sin(phi)};
            acc += m.symbol(xi);
        }
        acc /= static_cast<double>(nphi);
    } else if (m.dim == 3) {
        QuadRule gl = gauss_legendre(64, -1.0, 1.0);
        const int nphi = 128;
        for (int iu = 0; iu < 64; ++iu) {
            double u = gl.nodes[iu];
            double r = std::sqrt(std::max(0.0, 1.0 - u * u));
            cplx ring(0.0, 0.0);
            for (int i = 0; i < nphi; ++i) {
                double phi = 2.0 * M_PI * i / nphi;
                double xi[3] = {r * std::cos(phi), r * std::sin(phi), u};
                ring += m.symbol(xi);
            }
            acc += gl.weights[iu] * ring / static_cast<double>(nphi);
        }
        acc *= 0.5; // weights integrate du over [-1,1]; surface measure / (4 pi)
    } else {
        throw std::invalid_argument("sphere_average: unsupported dimension");
    }
    if (std::abs(acc.imag()) > 1e-10)
        throw std::domain_error("sphere_average: symbol average is not real");
    return acc.real();
}

void validate_multiplier(const Multiplier& m) {
    if (m.dim < 1 || m.dim > 3) throw std::invalid_argument("multiplier: dim must be 1, 2, or 3");
    Rng rng(0xC0FFEEu, 7);
    for (int trial = 0; trial < 64; ++trial) {
        double xi[3], mxi[3], sxi[3];
        double nn = 0.0;
        for (int i = 0; i < m.dim; ++i) {
            xi[i] = rng.normal();
            nn += xi[i] * xi[i];
        }
        if (nn < 1e-8) continue;
        double lambda = std::exp(rng.uniform(-3.0, 3.0));
        for (int i = 0; i < m.dim; ++i) {
            mxi[i] = -xi[i];
            sxi[i] = lambda * xi[i];
        }
        cplx v = m.symbol(xi), vneg = m.symbol(mxi), vscaled = m.symbol(sxi);
        double scale = std::max(1.0, std::abs(v));
        if (std::abs(vscaled - v) > 1e-10 * scale)
            throw std::domain_error("multiplier '" + m.name + "': symbol is not homogeneous of order zero");
        if (m.parity == Parity::EvenReal) {
            if (std::abs(v.imag()) > 1e-10 * scale || std::abs(vneg - v) > 1e-10 * scale)
                throw std::domain_error("multiplier '" + m.name + "': even-real parity violated");
        } else {
            if (std::abs(v.real()) > 1e-10 * scale || std::abs(vneg + v) > 1e-10 * scale)
                throw std::domain_error("multiplier '" + m.name + "': odd-imaginary parity violated");
        }
    }
}

std::vector<cplx> symbol_table(const Multiplier& m, int n) {
    std::size_t total = 1;
    for (int i = 0; i < m.dim; ++i) total *= static_cast<std::size_t>(n);
    std::vector<cplx> table(total);
    for_each_mode(m.dim, n, [&](std::size_t flat, const int* k) {
        bool zero = true;
        double xi[3];
        for (int i = 0; i < m.dim; ++i) {
            xi[i] = static_cast<double>(k[i]);
            zero = zero && k[i] == 0;
        }
        table[flat] = zero ? cplx(m.zero_value, 0.0) : m.symbol(xi);
    });
    return table;
}

GridFunction apply_multiplier(const Multiplier& m, const GridFunction& f) {
    if (m.dim != f.dim()) throw std::invalid_argument("apply_multiplier: dimension mismatch");
    GridFunction g = f;
    g.apply_symbol_table(symbol_table(m, f.n()));
    return g;
}

Multiplier compose_with_linear_map(const Multiplier& m, const TransformMatrix& a) {
    if (a.dim != m.dim) throw std::invalid_argument("compose_with_linear_map: dimension mismatch");
    if (std::abs(a.det()) < 1e-14) throw std::domain_error("compose_with_linear_map: matrix is singular");
    Multiplier c;
    c.dim = m.dim;
    c.parity = m.parity;
    c.name = m.name + "∘A";
    auto inner = m.symbol;
    TransformMatrix mat = a;
    int d = m.dim;
    c.symbol = [inner, mat, d](const double* xi) {
        double y[3] = {0.0, 0.0, 0.0};
        for (int r = 0; r < d; ++r)
            for (int cc = 0; cc < d; ++cc) y[r] += mat.at(r, cc) * xi[cc];
        return inner(y);
    };
    return finalize(c);
}

std::pair<double, double> multiplier_extrema(const Multiplier& m, int samples) {
    if (m.parity != Parity::EvenReal)
        throw std::domain_error("multiplier_extrema: defined for even-real symbols");
    if (samples < 256) throw std::invalid_argument("multiplier_extrema: samples must be >= 256");

    auto eval2 = [&](double phi) {
        double xi[2] = {std::cos(phi), std::sin(phi)};
        return m.symbol(xi).real();
    };
    auto eval3 = [&](double u, double phi) {
        double r = std::sqrt(std::max(0.0, 1.0 - u * u));
        double xi[3] = {r * std::cos(phi), r * std::sin(phi), u};
        return m.symbol(xi).real();
    };

    double lo = 0.0, hi = 0.0;
    if (m.dim == 2) {
        // dense scan, then golden-section refinement around each extremum
        int best_max = 0, best_min = 0;
        double vmax = -1e300, vmin = 1e300;
        for (int i = 0; i < samples; ++i) {
            double v = eval2(2.0 * M_PI * i / samples);
            if (v > vmax) { vmax = v; best_max = i; }
            if (v < vmin) { vmin = v; best_min = i; }
        }
        auto refine = [&](int i0, double sign) {
            double a = 2.0 * M_PI * (i0 - 1) / samples;
            double b = 2.0 * M_PI * (i0 + 1) / samples;
            const double gr = 0.6180339887498949;
            double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
            double f1 = sign * eval2(c1), f2 = sign * eval2(c2);
            for (int it = 0; it < 80; ++it) {
                if (f1 > f2) {
                    b = c2; c2 = c1; f2 = f1;
                    c1 = b - gr * (b - a);
                    f1 = sign * eval2(c1);
                } else {
                    a = c1; c1 = c2; f1 = f2;
                    c2 = a + gr * (b - a);
                    f2 = sign * eval2(c2);
                }
            }
            return sign * std::max(f1, f2); // sign*eval was maximized
        };
        hi = std::max(vmax, refine(best_max, 1.0));
        lo = std::min(vmin, refine(best_min, -1.0));
    } else if (m.dim == 3) {
        int nu = static_cast<int>(std::sqrt(static_cast<double>(samples)));
        int nphi = nu * 2;
        double vmax = -1e300, vmin = 1e300;
        double argmax[2] = {0, 0}, argmin[2] = {0, 0};
        for (int iu = 0; iu <= nu; ++iu) {
            double u = -1.0 + 2.0 * iu / nu;
            for (int ip = 0; ip < nphi; ++ip) {
                double phi = 2.0 * M_PI * ip / nphi;
                double v = eval3(u, phi);
                if (v > vmax) { vmax = v; argmax[0] = u; argmax[1] = phi; }
                if (v < vmin) { vmin = v; argmin[0] = u; argmin[1] = phi; }
            }
        }
        // coordinate descent with shrinking steps
        auto polish = [&](double u, double phi, double sign) {
            double step_u = 2.0 / nu, step_p = 2.0 * M_PI / nphi;
            double best = sign * eval3(u, phi);
            for (int it = 0; it < 200; ++it) {
                bool improved = false;
                for (int dir = 0; dir < 4; ++dir) {
                    double uu = u + (dir == 0 ? step_u : dir == 1 ? -step_u : 0.0);
                    uu = std::clamp(uu, -1.0, 1.0);
                    double pp = phi + (dir == 2 ? step_p : dir == 3 ? -step_p : 0.0);
                    double v = sign * eval3(uu, pp);
                    if (v > best) {
                        best = v; u = uu; phi = pp; improved = true;
                    }
                }
                if (!improved) {
                    step_u *= 0.5;
                    step_p *= 0.5;
                    if (step_u < 1e-10 && step_p < 1e-10) break;
                }
            }
            return sign * best;
        };
        hi = std::max(vmax, polish(argmax[0], argmax[1], 1.0));
        lo = std::min(vmin, polish(argmin[0], argmin[1], -1.0));
    } else {
        throw std::invalid_argument("multiplier_extrema: unsupported dimension");
    }
    return {lo, hi};
}

double umd_bound_factor(double delta_minus, double delta_plus) {
    if (!(delta_plus > delta_minus))
        throw std::domain_error("umd_bound_factor: requires delta_plus > delta_minus");
    double denom = std::abs(delta_plus) + std::abs(delta_minus);
    return 2.0 / (delta_plus - delta_minus) *
           (1.0 + std::abs(delta_plus + delta_minus) / denom);
}

double umd_bound_factor(const Multiplier& m) {
    auto [lo, hi] = multiplier_extrema(m);
    return umd_bound_factor(lo, hi);
}

} // namespace umdlab
