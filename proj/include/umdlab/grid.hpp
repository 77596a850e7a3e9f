#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "umdlab/rng.hpp"

namespace umdlab {

using cplx = std::complex<double>;

enum class VectorNorm { L1, L2, Linf };

/// Complex-valued samples on the uniform grid theta_j = -pi + 2*pi*j/N of
/// the d-torus, optionally R^n-valued (value_dim components per point).
///
/// Spectral convention: f(theta) = sum_k coef(k) exp(i<k,theta>), with the
/// lattice k in [-N/2+1, N/2-1]^d. Nyquist bins |k_i| = N/2 are zeroed on
/// construction and after every spectral operation, so real inputs stay
/// real under the parity-respecting symbols used here.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(int dim, int points_per_axis, int value_dim = 1);

    int dim() const { return dim_; }
    int n() const { return n_; }
    int value_dim() const { return value_dim_; }
    std::size_t grid_size() const { return grid_size_; }

    cplx& value(std::size_t flat, int comp = 0) { return values_[static_cast<std::size_t>(comp) * grid_size_ + flat]; }
    const cplx& value(std::size_t flat, int comp = 0) const { return values_[static_cast<std::size_t>(comp) * grid_size_ + flat]; }

    double theta(int grid_index) const;          // -pi + 2*pi*j/N
    std::size_t flat_index(const int* idx) const; // row-major, axis 0 slowest
    void grid_point(std::size_t flat, double* theta_out) const;

    bool real_flagged() const { return real_flag_; }
    void set_real_flag(bool v) { real_flag_ = v; }
    /// Max-norm of the imaginary part over all points/components.
    double max_imag() const;

    /// True Fourier coefficients, one plane per component, in bin layout
    /// (bin j holds coef(k(j)), k = j < N/2 ? j : j - N per axis).
    std::vector<cplx> spectrum(int comp = 0) const;
    void set_spectrum(const std::vector<cplx>& coef, int comp = 0);

    int freq_of_bin(int bin) const { return bin < n_ / 2 ? bin : bin - n_; }
    int bin_of_freq(int k) const { return k >= 0 ? k : k + n_; }
    std::size_t bin_flat(const int* k) const;

    /// coef(k) for a single lattice point (O(N^d) path is spectrum()).
    cplx coefficient(const int* k, int comp = 0) const;

    /// Applies a spectral diagonal op: coef(k) <- factor(k)*coef(k) for
    /// k != 0 and coef(0) <- zero_factor*coef(0). Nyquist bins re-zeroed.
    void apply_symbol(const std::function<cplx(const int*)>& factor, cplx zero_factor);
    /// Same with precomputed per-bin factors (hot loops).
    void apply_symbol_table(const std::vector<cplx>& factors);

    void project_mean_zero();
    cplx mean(int comp = 0) const;

    double lp_norm(double p, VectorNorm vn = VectorNorm::L2) const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double s);

    /// Pointwise duality map J_q(f) = |f|^{q-1} sgn(f) for real scalar f.
    GridFunction duality_map(double q) const;

    /// Embeds coefficients into a finer grid (band-limited regridding).
    GridFunction regrid(int new_n) const;

    /// f |-> f(M theta) for an integer matrix M (mod 2pi); spectrum maps
    /// k -> M^T k. Throws if an image mode leaves the band. Exact and
    /// measure preserving when |det M| != 0.
    GridFunction compose_integer_map(const std::vector<int>& m_rowmajor) const;

    /// GFN1 container (see README for the byte layout).
    void write_gfn1(const std::string& path) const;
    static GridFunction read_gfn1(const std::string& path);

private:
    void zero_nyquist_bins(std::vector<cplx>& bins) const;

    int dim_ = 0;
    int n_ = 0;
    int value_dim_ = 1;
    std::size_t grid_size_ = 0;
    bool real_flag_ = false;
    std::vector<cplx> values_;
};

/// Iterates all bins; fn(flat, k) with k the d-vector of frequencies.
void for_each_mode(int dim, int n, const std::function<void(std::size_t, const int*)>& fn);

/// Random real band-limited function: iid coefficients c_k on |k|_inf <= band
/// (Hermitian-symmetrized), heavy_tail draws Cauchy-like ratios instead of
/// normals. An optional mode filter restricts the support.
GridFunction random_band_limited(int dim, int n, int band, Rng& rng,
                                 bool heavy_tail = false,
                                 const std::function<bool(const int*)>& keep = nullptr);

} // namespace umdlab
