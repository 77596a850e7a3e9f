#include "umdlab/walsh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace umdlab {

OperatorMatrix OperatorMatrix::identity(int n) {
    OperatorMatrix s;
    s.rows = s.cols = n;
    s.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) s.a[static_cast<std::size_t>(i) * n + i] = 1.0;
    return s;
}

std::vector<double> OperatorMatrix::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != cols)
        throw std::invalid_argument("OperatorMatrix::apply: dimension mismatch");
    std::vector<double> y(rows, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) y[r] += a[static_cast<std::size_t>(r) * cols + c] * x[c];
    return y;
}

OperatorMatrix summation_operator(int n) {
    if (n < 1) throw std::invalid_argument("summation_operator: n must be >= 1");
    OperatorMatrix s;
    s.rows = s.cols = n;
    s.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c <= r; ++c) s.a[static_cast<std::size_t>(r) * n + c] = 1.0;
    s.input_norm = VectorNorm::L1;
    s.output_norm = VectorNorm::Linf;
    return s;
}

double coord_norm(const std::vector<double>& x, VectorNorm vn) {
    double v = 0.0;
    switch (vn) {
        case VectorNorm::L1:
            for (double t : x) v += std::abs(t);
            return v;
        case VectorNorm::L2:
            for (double t : x) v += t * t;
            return std::sqrt(v);
        case VectorNorm::Linf:
            for (double t : x) v = std::max(v, std::abs(t));
            return v;
    }
    return v;
}

void WalshPaleyInstance::validate() const {
    if (depth < 1 || depth > 24) throw std::invalid_argument("WalshPaleyInstance: depth must be in [1,24]");
    if (value_dim < 1) throw std::invalid_argument("WalshPaleyInstance: value_dim must be >= 1");
    if (static_cast<int>(tables.size()) != depth)
        throw std::invalid_argument("WalshPaleyInstance: need one table per level");
    bool all_zero = true;
    for (int k = 0; k < depth; ++k) {
        if (tables[k].size() != (1u << k))
            throw std::invalid_argument("WalshPaleyInstance: level " + std::to_string(k + 1) +
                                        " table must have 2^" + std::to_string(k) + " entries");
        for (const auto& entry : tables[k]) {
            if (static_cast<int>(entry.size()) != value_dim)
                throw std::invalid_argument("WalshPaleyInstance: entry dimension mismatch");
            for (double v : entry)
                if (v != 0.0) all_zero = false;
        }
    }
    if (all_zero) throw std::invalid_argument("WalshPaleyInstance: all coefficients are zero");
}

WalshPaleyInstance WalshPaleyInstance::random(int depth, int value_dim, Rng& rng) {
    WalshPaleyInstance inst;
    inst.depth = depth;
    inst.value_dim = value_dim;
    inst.tables.resize(depth);
    for (int k = 0; k < depth; ++k) {
        inst.tables[k].resize(1u << k);
        for (auto& entry : inst.tables[k]) {
            entry.resize(value_dim);
            for (double& v : entry) v = rng.normal();
        }
    }
    inst.validate();
    return inst;
}

WalshPaleyInstance WalshPaleyInstance::random_quantized(int depth, int value_dim, Rng& rng,
                                                        const std::vector<double>& values) {
    WalshPaleyInstance inst;
    inst.depth = depth;
    inst.value_dim = value_dim;
    inst.tables.resize(depth);
    bool nonzero = false;
    do {
        for (int k = 0; k < depth; ++k) {
            inst.tables[k].assign(1u << k, std::vector<double>(value_dim));
            for (auto& entry : inst.tables[k])
                for (double& v : entry) {
                    v = values[rng.below(values.size())];
                    if (v != 0.0) nonzero = true;
                }
        }
    } while (!nonzero);
    inst.validate();
    return inst;
}

void TransformCoefficients::validate() const {
    for (double a : alpha)
        if (!(std::abs(a) <= 1.0 + 1e-12))
            throw std::invalid_argument("TransformCoefficients: |alpha_k| must be <= 1");
}

WpRatio wp_transform_ratio(const WalshPaleyInstance& inst, const TransformCoefficients& alpha,
                           double p, const OperatorMatrix* s) {
    inst.validate();
    alpha.validate();
    if (static_cast<int>(alpha.alpha.size()) != inst.depth)
        throw std::invalid_argument("wp_transform_ratio: alpha length must equal depth");
    if (!(p > 1.0)) throw std::invalid_argument("wp_transform_ratio: p must be > 1");
    if (s && s->cols != inst.value_dim)
        throw std::invalid_argument("wp_transform_ratio: operator input dimension mismatch");

    const int n = inst.depth;
    const int m = inst.value_dim;
    const std::size_t atoms = std::size_t{1} << n;
    const VectorNorm in_norm = s ? s->input_norm : VectorNorm::L2;
    const VectorNorm out_norm = s ? s->output_norm : VectorNorm::L2;

    const bool sorted = n <= 16; // collect-and-sort keeps couplings bitwise exact
    std::vector<double> num_terms, den_terms;
    if (sorted) {
        num_terms.reserve(atoms);
        den_terms.reserve(atoms);
    }
    double num_acc = 0.0, den_acc = 0.0, num_c = 0.0, den_c = 0.0;
    std::vector<double> plain(m), trans(s ? s->rows : m);
    for (std::size_t atom = 0; atom < atoms; ++atom) {
        std::fill(plain.begin(), plain.end(), 0.0);
        std::fill(trans.begin(), trans.end(), 0.0);
        for (int k = 0; k < n; ++k) {
            double eps = (atom >> k) & 1u ? 1.0 : -1.0;
            const std::vector<double>& d = inst.tables[k][atom & ((std::size_t{1} << k) - 1)];
            if (s) {
                std::vector<double> sd = s->apply(d);
                for (int c = 0; c < s->rows; ++c) trans[c] += alpha.alpha[k] * eps * sd[c];
            } else {
                for (int c = 0; c < m; ++c) trans[c] += alpha.alpha[k] * eps * d[c];
            }
            for (int c = 0; c < m; ++c) plain[c] += eps * d[c];
        }
        double nt = (m == 1 && !s) ? std::abs(trans[0]) : coord_norm(trans, out_norm);
        double dt = (m == 1) ? std::abs(plain[0]) : coord_norm(plain, in_norm);
        double ntp = std::pow(nt, p), dtp = std::pow(dt, p);
        if (sorted) {
            num_terms.push_back(ntp);
            den_terms.push_back(dtp);
        } else {
            // Kahan streaming
            double y = ntp - num_c, t = num_acc + y;
            num_c = (t - num_acc) - y;
            num_acc = t;
            y = dtp - den_c;
            t = den_acc + y;
            den_c = (t - den_acc) - y;
            den_acc = t;
        }
    }
    if (sorted) {
        std::sort(num_terms.begin(), num_terms.end());
        std::sort(den_terms.begin(), den_terms.end());
        for (double t : num_terms) num_acc += t;
        for (double t : den_terms) den_acc += t;
    }
    const double scale = 1.0 / static_cast<double>(atoms);
    WpRatio r;
    r.numerator = std::pow(num_acc * scale, 1.0 / p);
    r.denominator = std::pow(den_acc * scale, 1.0 / p);
    if (r.denominator == 0.0) throw std::domain_error("wp_transform_ratio: degenerate instance");
    r.ratio = r.numerator / r.denominator;
    return r;
}

std::vector<double> multilinear_coeffs(const WalshPaleyInstance& inst, int level) {
    if (inst.value_dim != 1) throw std::invalid_argument("multilinear_coeffs: scalar instances only");
    if (level < 1 || level > inst.depth) throw std::invalid_argument("multilinear_coeffs: bad level");
    const std::size_t size = std::size_t{1} << (level - 1);
    std::vector<double> c(size, 0.0);
    for (std::size_t mask = 0; mask < size; ++mask) {
        double acc = 0.0;
        for (std::size_t atom = 0; atom < size; ++atom) {
            double chi = 1.0;
            for (int j = 0; j < level - 1; ++j)
                if ((mask >> j) & 1u) chi *= ((atom >> j) & 1u) ? 1.0 : -1.0;
            acc += chi * inst.tables[level - 1][atom][0];
        }
        c[mask] = acc / static_cast<double>(size);
    }
    return c;
}

namespace {

// best over sign patterns with alpha_1 fixed to +1 (global sign symmetry)
void best_over_vertices(const WalshPaleyInstance& inst, double p, WpSearchResult& best,
                        long& evals, long budget, bool& exhausted) {
    const int n = inst.depth;
    TransformCoefficients alpha;
    alpha.alpha.assign(n, 1.0);
    const std::size_t patterns = std::size_t{1} << (n - 1);
    for (std::size_t pat = 0; pat < patterns; ++pat) {
        if (evals >= budget) {
            exhausted = true;
            return;
        }
        for (int k = 1; k < n; ++k) alpha.alpha[k] = (pat >> (k - 1)) & 1u ? -1.0 : 1.0;
        ++evals;
        WpRatio r;
        try {
            r = wp_transform_ratio(inst, alpha, p);
        } catch (const std::domain_error&) {
            continue; // degenerate denominator
        }
        if (r.ratio > best.best_ratio) {
            best.best_ratio = r.ratio;
            best.best_instance = inst;
            best.best_alpha = alpha.alpha;
        }
    }
}

} // namespace

WpSearchResult umd_lower_bound_search(int depth, double p, SearchStrategy strategy,
                                      const WpSearchOptions& opts) {
    if (!(p > 1.0)) throw std::invalid_argument("umd_lower_bound_search: p must be > 1");
    const double p_star = std::max(p, p / (p - 1.0));
    WpSearchResult best;
    long evals = 0;
    bool exhausted = false;

    if (strategy == SearchStrategy::ExhaustiveSmall) {
        if (depth > 4)
            throw std::invalid_argument("umd_lower_bound_search: exhaustive strategy needs depth <= 4");
        const int entries = (1 << depth) - 1; // scalar table cells across levels
        const std::size_t vcount = opts.value_set.size();
        WalshPaleyInstance inst;
        inst.depth = depth;
        inst.value_dim = 1;
        inst.tables.resize(depth);
        for (int k = 0; k < depth; ++k) inst.tables[k].assign(1u << k, std::vector<double>(1, 0.0));
        std::vector<std::size_t> digits(entries, 0);
        bool done = false;
        while (!done && !exhausted) {
            int e = 0;
            bool nonzero = false;
            for (int k = 0; k < depth; ++k)
                for (auto& cell : inst.tables[k]) {
                    cell[0] = opts.value_set[digits[e++]];
                    nonzero = nonzero || cell[0] != 0.0;
                }
            if (nonzero) best_over_vertices(inst, p, best, evals, opts.budget, exhausted);
            // odometer
            int pos = 0;
            while (pos < entries) {
                if (++digits[pos] < vcount) break;
                digits[pos++] = 0;
            }
            done = pos == entries;
        }
    } else if (strategy == SearchStrategy::RandomRestart) {
        Rng rng(opts.seed, 0);
        while (evals < opts.budget) {
            WalshPaleyInstance inst = WalshPaleyInstance::random(depth, 1, rng);
            best_over_vertices(inst, p, best, evals, opts.budget, exhausted);
        }
        exhausted = true; // budget-bounded by construction
    } else { // GreedyCoordinate
        Rng rng(opts.seed, 1);
        while (evals < opts.budget) {
            WalshPaleyInstance inst =
                WalshPaleyInstance::random_quantized(depth, 1, rng, opts.value_set);
            WpSearchResult local;
            best_over_vertices(inst, p, local, evals, opts.budget, exhausted);
            if (exhausted) {
                if (local.best_ratio > best.best_ratio) best = local;
                break;
            }
            bool improved = true;
            while (improved && evals < opts.budget) {
                improved = false;
                for (int k = 0; k < depth && evals < opts.budget; ++k)
                    for (auto& cell : inst.tables[k]) {
                        double old = cell[0];
                        for (double v : opts.value_set) {
                            if (v == old) continue;
                            cell[0] = v;
                            WpSearchResult trial;
                            best_over_vertices(inst, p, trial, evals, opts.budget, exhausted);
                            if (trial.best_ratio > local.best_ratio + 1e-12) {
                                local = trial;
                                old = v;
                                improved = true;
                            }
                            if (evals >= opts.budget) break;
                        }
                        cell[0] = old;
                    }
            }
            if (local.best_ratio > best.best_ratio) best = local;
        }
        exhausted = evals >= opts.budget;
    }

    best.evaluations = evals;
    best.budget_exhausted = exhausted;
    if (best.best_ratio > p_star - 1.0 + 1e-9)
        throw std::logic_error("umd_lower_bound_search: ratio exceeds the p*-1 bound; enumeration bug");
    return best;
}

bool verify_extreme_point(const WalshPaleyInstance& inst, double p, int grid_steps) {
    if (inst.depth > 12) throw std::invalid_argument("verify_extreme_point: depth must be <= 12");
    if (grid_steps < 2) throw std::invalid_argument("verify_extreme_point: need at least 2 grid steps");
    const int n = inst.depth;
    double grid_count = std::pow(static_cast<double>(grid_steps), n);
    if (grid_count > 4e6) throw std::invalid_argument("verify_extreme_point: alpha grid too large");

    TransformCoefficients alpha;
    alpha.alpha.assign(n, 0.0);
    double vertex_max = 0.0;
    for (std::size_t pat = 0; pat < (std::size_t{1} << n); ++pat) {
        for (int k = 0; k < n; ++k) alpha.alpha[k] = (pat >> k) & 1u ? 1.0 : -1.0;
        vertex_max = std::max(vertex_max, wp_transform_ratio(inst, alpha, p).ratio);
    }
    double grid_max = 0.0;
    std::vector<int> digit(n, 0);
    bool done = false;
    while (!done) {
        for (int k = 0; k < n; ++k)
            alpha.alpha[k] = -1.0 + 2.0 * digit[k] / (grid_steps - 1.0);
        grid_max = std::max(grid_max, wp_transform_ratio(inst, alpha, p).ratio);
        int pos = 0;
        while (pos < n) {
            if (++digit[pos] < grid_steps) break;
            digit[pos++] = 0;
        }
        done = pos == n;
    }
    return grid_max <= vertex_max + 1e-9;
}

} // namespace umdlab
