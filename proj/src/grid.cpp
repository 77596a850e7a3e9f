#include "umdlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <stdexcept>

namespace umdlab {

namespace {

// One cached FFTW plan pair per (dim, n); transforms go through an owned
// aligned buffer. Single-threaded by design (planner is not thread-safe).
class FftCache {
public:
    static FftCache& instance() {
        static FftCache c;
        return c;
    }

    void forward(int dim, int n, cplx* data) { run(dim, n, data, true); }
    void backward(int dim, int n, cplx* data) { run(dim, n, data, false); }

private:
    struct Entry {
        fftw_complex* buf = nullptr;
        fftw_plan fwd = nullptr;
        fftw_plan bwd = nullptr;
        std::size_t size = 0;
    };

    void run(int dim, int n, cplx* data, bool fwd) {
        Entry& e = get(dim, n);
        std::memcpy(e.buf, data, e.size * sizeof(cplx));
        fftw_execute(fwd ? e.fwd : e.bwd);
        std::memcpy(data, e.buf, e.size * sizeof(cplx));
    }

    Entry& get(int dim, int n) {
        auto key = std::make_pair(dim, n);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
        Entry e;
        e.size = 1;
        for (int i = 0; i < dim; ++i) e.size *= static_cast<std::size_t>(n);
        e.buf = fftw_alloc_complex(e.size);
        std::vector<int> shape(dim, n);
        e.fwd = fftw_plan_dft(dim, shape.data(), e.buf, e.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        e.bwd = fftw_plan_dft(dim, shape.data(), e.buf, e.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        return entries_.emplace(key, e).first->second;
    }

    std::map<std::pair<int, int>, Entry> entries_;
};

int parity_sign(const int* k, int dim) {
    long s = 0;
    for (int i = 0; i < dim; ++i) s += k[i];
    return (s & 1L) ? -1 : 1;
}

} // namespace

GridFunction::GridFunction(int dim, int points_per_axis, int value_dim)
    : dim_(dim), n_(points_per_axis), value_dim_(value_dim) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("GridFunction: dim must be 1, 2, or 3");
    if (points_per_axis < 4 || (points_per_axis & (points_per_axis - 1)) != 0)
        throw std::invalid_argument("GridFunction: points_per_axis must be a power of two >= 4");
    if (value_dim < 1) throw std::invalid_argument("GridFunction: value_dim must be >= 1");
    grid_size_ = 1;
    for (int i = 0; i < dim; ++i) grid_size_ *= static_cast<std::size_t>(n_);
    values_.assign(grid_size_ * static_cast<std::size_t>(value_dim_), cplx(0.0, 0.0));
}

double GridFunction::theta(int grid_index) const {
    return -M_PI + 2.0 * M_PI * grid_index / n_;
}

std::size_t GridFunction::flat_index(const int* idx) const {
    std::size_t f = 0;
    for (int i = 0; i < dim_; ++i) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[i]);
    return f;
}

void GridFunction::grid_point(std::size_t flat, double* theta_out) const {
    for (int i = dim_ - 1; i >= 0; --i) {
        theta_out[i] = theta(static_cast<int>(flat % n_));
        flat /= n_;
    }
}

double GridFunction::max_imag() const {
    double m = 0.0;
    for (const cplx& v : values_) m = std::max(m, std::abs(v.imag()));
    return m;
}

std::size_t GridFunction::bin_flat(const int* k) const {
    std::size_t f = 0;
    for (int i = 0; i < dim_; ++i) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(bin_of_freq(k[i]));
    return f;
}

void GridFunction::zero_nyquist_bins(std::vector<cplx>& bins) const {
    const int nyq = n_ / 2;
    for_each_mode(dim_, n_, [&](std::size_t flat, const int* k) {
        for (int i = 0; i < dim_; ++i) {
            if (k[i] == -nyq) {
                bins[flat] = cplx(0.0, 0.0);
                return;
            }
        }
    });
}

std::vector<cplx> GridFunction::spectrum(int comp) const {
    std::vector<cplx> bins(values_.begin() + static_cast<std::size_t>(comp) * grid_size_,
                           values_.begin() + static_cast<std::size_t>(comp + 1) * grid_size_);
    FftCache::instance().forward(dim_, n_, bins.data());
    const double scale = 1.0 / static_cast<double>(grid_size_);
    for_each_mode(dim_, n_, [&](std::size_t flat, const int* k) {
        bins[flat] *= scale * parity_sign(k, dim_);
    });
    zero_nyquist_bins(bins);
    return bins;
}

void GridFunction::set_spectrum(const std::vector<cplx>& coef, int comp) {
    if (coef.size() != grid_size_) throw std::invalid_argument("set_spectrum: size mismatch");
    std::vector<cplx> bins(coef);
    zero_nyquist_bins(bins);
    for_each_mode(dim_, n_, [&](std::size_t flat, const int* k) {
        bins[flat] *= static_cast<double>(parity_sign(k, dim_));
    });
    FftCache::instance().backward(dim_, n_, bins.data());
    std::copy(bins.begin(), bins.end(), values_.begin() + static_cast<std::size_t>(comp) * grid_size_);
}

cplx GridFunction::coefficient(const int* k, int comp) const {
    for (int i = 0; i < dim_; ++i)
        if (std::abs(k[i]) >= n_ / 2) return cplx(0.0, 0.0);
    // Direct DFT of one bin.
    cplx acc(0.0, 0.0);
    std::vector<double> th(dim_);
    for (std::size_t f = 0; f < grid_size_; ++f) {
        grid_point(f, th.data());
        double phase = 0.0;
        for (int i = 0; i < dim_; ++i) phase += k[i] * th[i];
        acc += value(f, comp) * std::polar(1.0, -phase);
    }
    return acc / static_cast<double>(grid_size_);
}

void GridFunction::apply_symbol(const std::function<cplx(const int*)>& factor, cplx zero_factor) {
    for (int c = 0; c < value_dim_; ++c) {
        std::vector<cplx> bins = spectrum(c);
        for_each_mode(dim_, n_, [&](std::size_t flat, const int* k) {
            bool zero = true;
            for (int i = 0; i < dim_; ++i) zero = zero && (k[i] == 0);
            bins[flat] *= zero ? zero_factor : factor(k);
        });
        set_spectrum(bins, c);
    }
}

void GridFunction::apply_symbol_table(const std::vector<cplx>& factors) {
    for (int c = 0; c < value_dim_; ++c) {
        std::vector<cplx> bins = spectrum(c);
        for (std::size_t f = 0; f < grid_size_; ++f) bins[f] *= factors[f];
        set_spectrum(bins, c);
    }
}

void GridFunction::project_mean_zero() {
    for (int c = 0; c < value_dim_; ++c) {
        cplx m = mean(c);
        for (std::size_t f = 0; f < grid_size_; ++f) value(f, c) -= m;
    }
}

cplx GridFunction::mean(int comp) const {
    cplx acc(0.0, 0.0);
    for (std::size_t f = 0; f < grid_size_; ++f) acc += value(f, comp);
    return acc / static_cast<double>(grid_size_);
}

double GridFunction::lp_norm(double p, VectorNorm vn) const {
    if (p <= 1.0) throw std::invalid_argument("lp_norm: p must be > 1");
    // Sorted accumulation keeps the reflection-coupled identities exact.
    std::vector<double> terms(grid_size_);
    for (std::size_t f = 0; f < grid_size_; ++f) {
        double mag = 0.0;
        if (value_dim_ == 1) {
            mag = std::abs(value(f, 0));
        } else {
            switch (vn) {
                case VectorNorm::L1:
                    for (int c = 0; c < value_dim_; ++c) mag += std::abs(value(f, c));
                    break;
                case VectorNorm::L2: {
                    double s = 0.0;
                    for (int c = 0; c < value_dim_; ++c) s += std::norm(value(f, c));
                    mag = std::sqrt(s);
                    break;
                }
                case VectorNorm::Linf:
                    for (int c = 0; c < value_dim_; ++c) mag = std::max(mag, std::abs(value(f, c)));
                    break;
            }
        }
        terms[f] = std::pow(mag, p);
    }
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return std::pow(acc / static_cast<double>(grid_size_), 1.0 / p);
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (cplx& v : values_) v *= s;
    return *this;
}

GridFunction GridFunction::duality_map(double q) const {
    if (value_dim_ != 1) throw std::invalid_argument("duality_map: scalar functions only");
    GridFunction g(dim_, n_, 1);
    g.real_flag_ = real_flag_;
    for (std::size_t f = 0; f < grid_size_; ++f) {
        double x = value(f, 0).real();
        double m = std::abs(x);
        g.value(f, 0) = cplx(m > 0.0 ? std::pow(m, q - 1.0) * (x < 0.0 ? -1.0 : 1.0) : 0.0, 0.0);
    }
    return g;
}

GridFunction GridFunction::regrid(int new_n) const {
    if (new_n < n_) throw std::invalid_argument("regrid: only refinement is supported");
    GridFunction g(dim_, new_n, value_dim_);
    g.real_flag_ = real_flag_;
    for (int c = 0; c < value_dim_; ++c) {
        std::vector<cplx> src = spectrum(c);
        std::vector<cplx> dst(g.grid_size(), cplx(0.0, 0.0));
        for_each_mode(dim_, n_, [&](std::size_t flat, const int* k) {
            if (src[flat] != cplx(0.0, 0.0)) dst[g.bin_flat(k)] = src[flat];
        });
        g.set_spectrum(dst, c);
    }
    return g;
}

GridFunction GridFunction::compose_integer_map(const std::vector<int>& m_rowmajor) const {
    if (static_cast<int>(m_rowmajor.size()) != dim_ * dim_)
        throw std::invalid_argument("compose_integer_map: matrix size mismatch");
    GridFunction g(dim_, n_, value_dim_);
    g.real_flag_ = real_flag_;
    for (int c = 0; c < value_dim_; ++c) {
        std::vector<cplx> src = spectrum(c);
        std::vector<cplx> dst(grid_size_, cplx(0.0, 0.0));
        double peak = 0.0;
        for (const cplx& v : src) peak = std::max(peak, std::abs(v));
        const double dust = 1e-14 * peak; // FFT roundoff in empty bins
        bool overflow = false;
        for_each_mode(dim_, n_, [&](std::size_t flat, const int* k) {
            if (std::abs(src[flat]) <= dust) return;
            int kk[3] = {0, 0, 0};
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j) kk[i] += m_rowmajor[j * dim_ + i] * k[j]; // M^T k
            for (int i = 0; i < dim_; ++i)
                if (std::abs(kk[i]) >= n_ / 2) overflow = true;
            if (!overflow) dst[bin_flat(kk)] += src[flat];
        });
        if (overflow)
            throw std::domain_error("compose_integer_map: image mode leaves the band; refine the grid");
        g.set_spectrum(dst, c);
    }
    return g;
}

void GridFunction::write_gfn1(const std::string& path) const {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("write_gfn1: cannot open " + path);
    std::fwrite("GFN1", 1, 4, fp);
    std::uint32_t hdr[3] = {static_cast<std::uint32_t>(dim_), static_cast<std::uint32_t>(n_),
                            static_cast<std::uint32_t>(value_dim_)};
    std::fwrite(hdr, sizeof(std::uint32_t), 3, fp);
    std::uint8_t rf = real_flag_ ? 1 : 0;
    std::fwrite(&rf, 1, 1, fp);
    for (std::size_t f = 0; f < grid_size_; ++f)
        for (int c = 0; c < value_dim_; ++c) {
            double re = value(f, c).real(), im = value(f, c).imag();
            std::fwrite(&re, sizeof(double), 1, fp);
            std::fwrite(&im, sizeof(double), 1, fp);
        }
    std::fclose(fp);
}

GridFunction GridFunction::read_gfn1(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("read_gfn1: cannot open " + path);
    char magic[4];
    std::uint32_t hdr[3];
    std::uint8_t rf = 0;
    if (std::fread(magic, 1, 4, fp) != 4 || std::memcmp(magic, "GFN1", 4) != 0) {
        std::fclose(fp);
        throw std::runtime_error("read_gfn1: bad magic in " + path);
    }
    if (std::fread(hdr, sizeof(std::uint32_t), 3, fp) != 3 || std::fread(&rf, 1, 1, fp) != 1) {
        std::fclose(fp);
        throw std::runtime_error("read_gfn1: truncated header in " + path);
    }
    GridFunction g(static_cast<int>(hdr[0]), static_cast<int>(hdr[1]), static_cast<int>(hdr[2]));
    for (std::size_t f = 0; f < g.grid_size(); ++f)
        for (int c = 0; c < g.value_dim(); ++c) {
            double re, im;
            if (std::fread(&re, sizeof(double), 1, fp) != 1 || std::fread(&im, sizeof(double), 1, fp) != 1) {
                std::fclose(fp);
                throw std::runtime_error("read_gfn1: truncated payload in " + path);
            }
            g.value(f, c) = cplx(re, im);
        }
    std::fclose(fp);
    g.set_real_flag(rf != 0);
    if (rf != 0 && g.max_imag() > 1e-12)
        throw std::runtime_error("read_gfn1: real flag set but imaginary residual exceeds 1e-12");
    return g;
}

void for_each_mode(int dim, int n, const std::function<void(std::size_t, const int*)>& fn) {
    int k[3] = {0, 0, 0};
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int i = dim - 1; i >= 0; --i) {
            int bin = static_cast<int>(rem % n);
            rem /= n;
            k[i] = bin < n / 2 ? bin : bin - n;
        }
        fn(flat, k);
    }
}

GridFunction random_band_limited(int dim, int n, int band, Rng& rng, bool heavy_tail,
                                 const std::function<bool(const int*)>& keep) {
    if (band >= n / 2) throw std::invalid_argument("random_band_limited: band must stay below Nyquist");
    GridFunction g(dim, n, 1);
    std::vector<cplx> coef(g.grid_size(), cplx(0.0, 0.0));
    // Fill each {k,-k} pair once, conjugate-symmetric, in a fixed mode order
    // so the draw sequence is reproducible across grids.
    int lo = -band, hi = band;
    int k[3] = {0, 0, 0};
    std::function<void(int)> rec = [&](int axis) {
        if (axis == dim) {
            bool zero = true;
            for (int i = 0; i < dim; ++i) zero = zero && k[i] == 0;
            if (zero) return;
            // take the lexicographically positive representative of {k,-k}
            for (int i = 0; i < dim; ++i) {
                if (k[i] > 0) break;
                if (k[i] < 0) return;
            }
            double re = rng.normal(), im = rng.normal();
            if (heavy_tail) {
                double s = rng.normal();
                double denom = std::max(std::abs(s), 0.05);
                re /= denom;
                im /= denom;
            }
            if (keep && !keep(k)) return;
            cplx c(re, im);
            int mk[3];
            for (int i = 0; i < dim; ++i) mk[i] = -k[i];
            coef[g.bin_flat(k)] = c;
            coef[g.bin_flat(mk)] = std::conj(c);
            return;
        }
        for (k[axis] = lo; k[axis] <= hi; ++k[axis]) rec(axis + 1);
    };
    rec(0);
    g.set_spectrum(coef, 0);
    g.set_real_flag(true);
    return g;
}

} // namespace umdlab
