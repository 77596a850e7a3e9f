#include "umdlab/heat.hpp"

#include <cmath>
#include <stdexcept>

#include "umdlab/quadrature.hpp"
#include "umdlab/rng.hpp"

namespace umdlab {

namespace {

constexpr double kCoefDust = 1e-14;

// sin/cos of the small per-step phase increments; |x| stays below ~0.35 for
// the step sizes in use, with a libm fallback for the rare large draw
inline void unit_rotation(double x, double& c, double& s) {
    double x2 = x * x;
    if (x2 < 0.1225) {
        c = 1.0 + x2 * (-0.5 + x2 * (1.0 / 24.0 + x2 * (-1.0 / 720.0 + x2 / 40320.0)));
        s = x * (1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 / 362880.0))));
    } else {
        c = std::cos(x);
        s = std::sin(x);
    }
}

} // namespace

HeatEvaluator::HeatEvaluator(const GridFunction& f) : dim_(f.dim()) {
    if (f.value_dim() != 1) throw std::invalid_argument("HeatEvaluator: scalar functions only");
    std::vector<cplx> sp = f.spectrum();
    double peak = 0.0;
    for (const cplx& c : sp) peak = std::max(peak, std::abs(c));
    const double cutoff = kCoefDust * peak;
    for_each_mode(f.dim(), f.n(), [&](std::size_t flat, const int* k) {
        if (std::abs(sp[flat]) <= cutoff) return;
        bool zero = true;
        for (int i = 0; i < dim_; ++i) zero = zero && k[i] == 0;
        if (zero) {
            mean_ = sp[flat];
            return;
        }
        Mode m;
        m.k = {0, 0, 0};
        double k2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
            m.k[i] = k[i];
            k2 += static_cast<double>(k[i]) * k[i];
        }
        m.k2 = k2;
        m.coef = sp[flat];
        modes_.push_back(m);
    });
}

cplx HeatEvaluator::value(const double* x, double t) const {
    cplx acc = mean_;
    for (const Mode& m : modes_) {
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) phase += m.k[i] * x[i];
        acc += m.coef * std::exp(-0.5 * t * m.k2) * std::polar(1.0, phase);
    }
    return acc;
}

void HeatEvaluator::value_and_gradient(const double* x, double t, cplx& val, cplx* grad) const {
    val = mean_;
    for (int i = 0; i < dim_; ++i) grad[i] = cplx(0.0, 0.0);
    for (const Mode& m : modes_) {
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) phase += m.k[i] * x[i];
        cplx term = m.coef * std::exp(-0.5 * t * m.k2) * std::polar(1.0, phase);
        val += term;
        for (int i = 0; i < dim_; ++i) grad[i] += cplx(0.0, static_cast<double>(m.k[i])) * term;
    }
}

std::pair<cplx, std::vector<cplx>> heat_extension_eval(const GridFunction& f, const double* x,
                                                       double t) {
    if (t < 0.0) throw std::invalid_argument("heat_extension_eval: t must be >= 0");
    HeatEvaluator ev(f);
    cplx val;
    std::vector<cplx> grad(f.dim());
    ev.value_and_gradient(x, t, val, grad.data());
    return {val, grad};
}

GridFunction u_a_operator(const TransformMatrix& a, const GridFunction& f) {
    if (a.dim != f.dim()) throw std::invalid_argument("u_a_operator: dimension mismatch");
    GridFunction g = f;
    g.apply_symbol(
        [&](const int* k) {
            double xi[3];
            double k2 = 0.0;
            for (int i = 0; i < a.dim; ++i) {
                xi[i] = static_cast<double>(k[i]);
                k2 += xi[i] * xi[i];
            }
            return cplx(a.quad_form(xi) / k2, 0.0);
        },
        cplx(0.0, 0.0));
    return g;
}

namespace {

void require_mean_zero(const GridFunction& f, const char* who) {
    if (std::abs(f.mean()) > 1e-12 * std::max(1.0, f.lp_norm(2.0)))
        throw std::domain_error(std::string(who) + ": input must have mean zero");
}

} // namespace

double deterministic_bilinear_spectral(const TransformMatrix& a, const GridFunction& f,
                                       const GridFunction& g) {
    if (f.dim() != g.dim() || f.n() != g.n() || a.dim != f.dim())
        throw std::invalid_argument("deterministic_bilinear_spectral: shape mismatch");
    require_mean_zero(f, "deterministic_bilinear_spectral");
    require_mean_zero(g, "deterministic_bilinear_spectral");
    std::vector<cplx> fs = f.spectrum(), gs = g.spectrum();
    cplx acc(0.0, 0.0);
    for_each_mode(f.dim(), f.n(), [&](std::size_t flat, const int* k) {
        bool zero = true;
        double xi[3];
        double k2 = 0.0;
        for (int i = 0; i < f.dim(); ++i) {
            xi[i] = static_cast<double>(k[i]);
            k2 += xi[i] * xi[i];
            zero = zero && k[i] == 0;
        }
        if (zero) return;
        acc += fs[flat] * std::conj(gs[flat]) * (a.quad_form(xi) / k2);
    });
    return acc.real();
}

double deterministic_bilinear_time_quadrature(const TransformMatrix& a, const GridFunction& f,
                                              const GridFunction& g, double t_cut,
                                              int nodes_per_panel) {
    if (f.dim() != g.dim() || f.n() != g.n() || a.dim != f.dim())
        throw std::invalid_argument("deterministic_bilinear_time_quadrature: shape mismatch");
    require_mean_zero(f, "deterministic_bilinear_time_quadrature");
    require_mean_zero(g, "deterministic_bilinear_time_quadrature");
    const int d = f.dim();
    // integrand(t) = normalized grid sum of <A^T grad u(.,t), grad v(.,t)>
    auto gradient_at = [&](const GridFunction& h, double t) {
        std::vector<GridFunction> grad;
        for (int axis = 0; axis < d; ++axis) {
            GridFunction gh = h;
            gh.apply_symbol(
                [&](const int* k) {
                    double k2 = 0.0;
                    for (int i = 0; i < d; ++i) k2 += static_cast<double>(k[i]) * k[i];
                    return cplx(0.0, static_cast<double>(k[axis])) * std::exp(-0.5 * t * k2);
                },
                cplx(0.0, 0.0));
            grad.push_back(std::move(gh));
        }
        return grad;
    };
    auto integrand = [&](double t) {
        std::vector<GridFunction> gu = gradient_at(f, t);
        std::vector<GridFunction> gv = gradient_at(g, t);
        double acc = 0.0;
        for (std::size_t pt = 0; pt < f.grid_size(); ++pt) {
            for (int r = 0; r < d; ++r) {
                double atgu = 0.0; // (A^T grad u)_r = sum_c A_{c r} (grad u)_c
                for (int c = 0; c < d; ++c) atgu += a.at(c, r) * gu[c].value(pt).real();
                acc += atgu * gv[r].value(pt).real();
            }
        }
        return acc / static_cast<double>(f.grid_size());
    };
    // graded panels resolve the fast modes near t = 0
    int panels = std::max(24, static_cast<int>(std::ceil(std::log2(t_cut * f.n() * f.n()))) + 8);
    return integrate_graded_panels(integrand, t_cut, panels, nodes_per_panel);
}

// ---------------------------------------------------------------------------
// Monte Carlo engine
// ---------------------------------------------------------------------------

namespace {

struct SharedMode {
    int k1 = 0, k2 = 0;
    double k2norm = 0.0;
    int decay_row = 0; // index into the per-|k|^2 decay tables
};

} // namespace

std::vector<MCBilinearReport> mc_bilinear_many(
    const std::vector<TransformMatrix>& mats,
    const std::vector<std::pair<const GridFunction*, const GridFunction*>>& pairs,
    const MCConfig& cfg) {
    if (mats.empty() || pairs.empty()) throw std::invalid_argument("mc_bilinear_many: empty inputs");
    if (cfg.start != StartLaw::Uniform)
        throw std::invalid_argument("mc_bilinear_many: the bilinear estimator needs a uniform start");
    if (!(cfg.step > 0.0) || cfg.horizon < cfg.step)
        throw std::invalid_argument("mc_bilinear_many: need step > 0 and horizon >= step");
    const int dim = pairs.front().first->dim();
    if (dim != 2) throw std::invalid_argument("mc_bilinear_many: implemented for d = 2");
    for (auto& [pf, pg] : pairs) {
        if (pf->dim() != 2 || pg->dim() != 2)
            throw std::invalid_argument("mc_bilinear_many: implemented for d = 2");
        require_mean_zero(*pf, "mc_bilinear_many");
        require_mean_zero(*pg, "mc_bilinear_many");
    }
    for (const TransformMatrix& a : mats)
        if (a.dim != 2) throw std::invalid_argument("mc_bilinear_many: matrix dimension mismatch");

    const int n_steps = static_cast<int>(std::llround(cfg.horizon / cfg.step));
    const double h = cfg.step;
    const double sqrt_h = std::sqrt(h);
    const int n_mats = static_cast<int>(mats.size());
    const int n_pairs = static_cast<int>(pairs.size());

    // Distinct half-lattice modes across all functions (real functions: the
    // k/-k pair contributes -2 k Im(coef * phase) to the gradient).
    std::vector<SharedMode> modes;
    auto mode_index = [&](int k1, int k2) {
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (modes[i].k1 == k1 && modes[i].k2 == k2) return static_cast<int>(i);
        SharedMode m;
        m.k1 = k1;
        m.k2 = k2;
        m.k2norm = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
        modes.push_back(m);
        return static_cast<int>(modes.size() - 1);
    };
    // coefficient of each function on each mode (zero when absent)
    std::vector<std::vector<cplx>> ucoef(n_pairs), vcoef(n_pairs);
    auto gather = [&](const GridFunction& fn, std::vector<cplx>& out) {
        std::vector<cplx> sp = fn.spectrum();
        double peak = 0.0;
        for (const cplx& c : sp) peak = std::max(peak, std::abs(c));
        const double cutoff = kCoefDust * peak;
        for_each_mode(2, fn.n(), [&](std::size_t flat, const int* k) {
            if (std::abs(sp[flat]) <= cutoff) return;
            if (k[0] < 0 || (k[0] == 0 && k[1] <= 0)) return; // half lattice, k != 0
            int idx = mode_index(k[0], k[1]);
            if (static_cast<int>(out.size()) <= idx) out.resize(modes.size(), cplx(0, 0));
            out[idx] = sp[flat];
        });
    };
    for (int p = 0; p < n_pairs; ++p) {
        gather(*pairs[p].first, ucoef[p]);
        gather(*pairs[p].second, vcoef[p]);
    }
    const int n_modes = static_cast<int>(modes.size());
    for (int p = 0; p < n_pairs; ++p) {
        ucoef[p].resize(n_modes, cplx(0, 0));
        vcoef[p].resize(n_modes, cplx(0, 0));
    }

    // per-step decay tables, one row per distinct |k|^2
    std::vector<double> distinct_k2;
    for (SharedMode& m : modes) {
        int row = -1;
        for (std::size_t i = 0; i < distinct_k2.size(); ++i)
            if (distinct_k2[i] == m.k2norm) row = static_cast<int>(i);
        if (row < 0) {
            row = static_cast<int>(distinct_k2.size());
            distinct_k2.push_back(m.k2norm);
        }
        m.decay_row = row;
    }
    const int n_rows = static_cast<int>(distinct_k2.size());
    std::vector<double> decay(static_cast<std::size_t>(n_rows) * n_steps);
    for (int r = 0; r < n_rows; ++r)
        for (int j = 0; j < n_steps; ++j)
            decay[static_cast<std::size_t>(r) * n_steps + j] =
                std::exp(-0.5 * (cfg.horizon - j * h) * distinct_k2[r]);

    const int n_combo = n_mats * n_pairs;
    const int batches = std::max(2, cfg.batches);
    const long per_batch = std::max<long>(1, cfg.paths / batches);
    const long total_paths = per_batch * batches;
    std::vector<double> batch_sum(static_cast<std::size_t>(batches) * n_combo, 0.0);

    std::vector<double> ph_re(n_modes), ph_im(n_modes);
    std::vector<double> ito(static_cast<std::size_t>(n_pairs) * 3, 0.0); // per pair: Iu_x? see below
    // per pair accumulators: transformed integrals per matrix + plain integral
    std::vector<double> trans(static_cast<std::size_t>(n_pairs) * n_mats, 0.0);
    std::vector<double> plain(n_pairs, 0.0);

    for (long path = 0; path < total_paths; ++path) {
        Rng rng(cfg.seed, static_cast<std::uint64_t>(path) + 1);
        // uniform start
        double w0x = rng.uniform(-M_PI, M_PI);
        double w0y = rng.uniform(-M_PI, M_PI);
        for (int m = 0; m < n_modes; ++m) {
            double phase = modes[m].k1 * w0x + modes[m].k2 * w0y;
            ph_re[m] = std::cos(phase);
            ph_im[m] = std::sin(phase);
        }
        std::fill(trans.begin(), trans.end(), 0.0);
        std::fill(plain.begin(), plain.end(), 0.0);

        for (int j = 0; j < n_steps; ++j) {
            const double* drow = decay.data() + j;
            double d1, d2;
            rng.normal_pair(d1, d2);
            d1 *= sqrt_h;
            d2 *= sqrt_h;
            for (int p = 0; p < n_pairs; ++p) {
                double sux = 0.0, suy = 0.0, svx = 0.0, svy = 0.0;
                const cplx* uc = ucoef[p].data();
                const cplx* vc = vcoef[p].data();
                for (int m = 0; m < n_modes; ++m) {
                    double dk = decay[static_cast<std::size_t>(modes[m].decay_row) * n_steps + j];
                    double imu = uc[m].real() * ph_im[m] + uc[m].imag() * ph_re[m];
                    double imv = vc[m].real() * ph_im[m] + vc[m].imag() * ph_re[m];
                    double fu = -2.0 * dk * imu;
                    double fv = -2.0 * dk * imv;
                    sux += modes[m].k1 * fu;
                    suy += modes[m].k2 * fu;
                    svx += modes[m].k1 * fv;
                    svy += modes[m].k2 * fv;
                }
                for (int a = 0; a < n_mats; ++a) {
                    const TransformMatrix& mat = mats[a];
                    double adw1 = mat.at(0, 0) * d1 + mat.at(0, 1) * d2;
                    double adw2 = mat.at(1, 0) * d1 + mat.at(1, 1) * d2;
                    trans[static_cast<std::size_t>(p) * n_mats + a] += sux * adw1 + suy * adw2;
                }
                plain[p] += svx * d1 + svy * d2;
            }
            // advance the phases by exp(i <k, dW>)
            for (int m = 0; m < n_modes; ++m) {
                double ang = modes[m].k1 * d1 + modes[m].k2 * d2;
                double c, s;
                unit_rotation(ang, c, s);
                double re = ph_re[m] * c - ph_im[m] * s;
                double im = ph_re[m] * s + ph_im[m] * c;
                ph_re[m] = re;
                ph_im[m] = im;
            }
            (void)drow;
        }
        const int b = static_cast<int>(path / per_batch);
        for (int p = 0; p < n_pairs; ++p)
            for (int a = 0; a < n_mats; ++a)
                batch_sum[static_cast<std::size_t>(b) * n_combo + p * n_mats + a] +=
                    trans[static_cast<std::size_t>(p) * n_mats + a] * plain[p];
    }

    std::vector<MCBilinearReport> out(n_combo);
    for (int c = 0; c < n_combo; ++c) {
        double mean = 0.0;
        for (int b = 0; b < batches; ++b) mean += batch_sum[static_cast<std::size_t>(b) * n_combo + c];
        mean /= static_cast<double>(total_paths);
        double var = 0.0;
        for (int b = 0; b < batches; ++b) {
            double bm = batch_sum[static_cast<std::size_t>(b) * n_combo + c] / per_batch;
            var += (bm - mean) * (bm - mean);
        }
        var /= static_cast<double>(batches - 1);
        MCBilinearReport& r = out[c];
        r.estimate = mean;
        r.stderr_est = std::sqrt(var / batches);
        r.paths = total_paths;
        r.coarse_step_warning = cfg.step > 1e-2;
    }
    return out;
}

MCBilinearReport mc_bilinear(const TransformMatrix& a, const GridFunction& f,
                             const GridFunction& g, const MCConfig& cfg) {
    std::vector<TransformMatrix> mats = {a};
    std::vector<std::pair<const GridFunction*, const GridFunction*>> pairs = {{&f, &g}};
    return mc_bilinear_many(mats, pairs, cfg).front();
}

BrownianPath BrownianPath::sample(int dim, double step, double horizon, const double* start,
                                  std::uint64_t seed, std::uint64_t path_index) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("BrownianPath: dim must be 1..3");
    if (!(step > 0.0) || horizon < step)
        throw std::invalid_argument("BrownianPath: need step > 0 and horizon >= step");
    BrownianPath p;
    p.dim = dim;
    p.step = step;
    p.horizon = horizon;
    p.seed = seed;
    const int n = static_cast<int>(std::llround(horizon / step));
    Rng rng(seed, path_index + 1);
    const double sqrt_h = std::sqrt(step);
    std::array<double, 3> pos = {0, 0, 0};
    for (int i = 0; i < dim; ++i) pos[i] = start ? start[i] : 0.0;
    p.positions.push_back(pos);
    auto wrap = [](double x) {
        x = std::fmod(x + M_PI, 2.0 * M_PI);
        if (x < 0) x += 2.0 * M_PI;
        return x - M_PI;
    };
    for (int j = 0; j < n; ++j) {
        std::array<double, 3> inc = {0, 0, 0};
        for (int i = 0; i < dim; ++i) inc[i] = sqrt_h * rng.normal();
        p.increments.push_back(inc);
        for (int i = 0; i < dim; ++i) pos[i] = wrap(pos[i] + inc[i]);
        p.positions.push_back(pos);
    }
    return p;
}

std::pair<double, double> ito_transform_pathwise(
    const std::function<void(double t, const double* x, double* u_out)>& integrand,
    const TransformMatrix& a, const BrownianPath& path) {
    const int d = path.dim;
    if (a.dim != d) throw std::invalid_argument("ito_transform_pathwise: dimension mismatch");
    double transformed = 0.0, plainsum = 0.0;
    std::vector<double> u(d);
    for (std::size_t j = 0; j < path.increments.size(); ++j) {
        integrand(j * path.step, path.positions[j].data(), u.data());
        // <u, A dW> and <u, dW>
        for (int r = 0; r < d; ++r) {
            double adw = 0.0;
            for (int c = 0; c < d; ++c) adw += a.at(r, c) * path.increments[j][c];
            transformed += u[r] * adw;
            plainsum += u[r] * path.increments[j][r];
        }
    }
    return {transformed, plainsum};
}

} // namespace umdlab
