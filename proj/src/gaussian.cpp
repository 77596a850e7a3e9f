#include "umdlab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "umdlab/quadrature.hpp"

namespace umdlab {

int Monomial::total_degree() const {
    int d = 0;
    for (auto& [v, p] : factors) d += p;
    return d;
}

Polynomial Polynomial::constant(const std::vector<double>& c) {
    Polynomial p;
    p.value_dim = static_cast<int>(c.size());
    p.terms.emplace_back(Monomial{}, c);
    p.canonicalize();
    return p;
}

Polynomial Polynomial::variable(int var) {
    Polynomial p;
    p.value_dim = 1;
    p.terms.emplace_back(Monomial{{{var, 1}}}, std::vector<double>{1.0});
    return p;
}

bool Polynomial::is_zero() const {
    for (auto& [m, c] : terms)
        for (double v : c)
            if (v != 0.0) return false;
    return true;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (auto& [m, c] : terms) d = std::max(d, m.total_degree());
    return d;
}

int Polynomial::max_variable() const {
    int mv = -1;
    for (auto& [m, c] : terms)
        for (auto& [v, p] : m.factors) mv = std::max(mv, v);
    return mv;
}

void Polynomial::add_term(const Monomial& m, const std::vector<double>& c) {
    terms.emplace_back(m, c);
}

void Polynomial::canonicalize() {
    std::map<Monomial, std::vector<double>> merged;
    for (auto& [m, c] : terms) {
        auto [it, fresh] = merged.try_emplace(m, c);
        if (!fresh)
            for (int i = 0; i < value_dim; ++i) it->second[i] += c[i];
    }
    terms.clear();
    for (auto& [m, c] : merged) {
        bool nz = false;
        for (double v : c) nz = nz || v != 0.0;
        if (nz) terms.emplace_back(m, c);
    }
}

std::vector<double> Polynomial::eval(const double* phi) const {
    std::vector<double> out(value_dim, 0.0);
    for (auto& [m, c] : terms) {
        double mono = 1.0;
        for (auto& [v, p] : m.factors)
            for (int i = 0; i < p; ++i) mono *= phi[v];
        for (int i = 0; i < value_dim; ++i) out[i] += mono * c[i];
    }
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (value_dim != o.value_dim) throw std::invalid_argument("Polynomial += : value_dim mismatch");
    for (auto& t : o.terms) terms.push_back(t);
    canonicalize();
    return *this;
}

Polynomial Polynomial::scaled(double s) const {
    Polynomial p = *this;
    for (auto& [m, c] : p.terms)
        for (double& v : c) v *= s;
    p.canonicalize();
    return p;
}

Polynomial poly_product(const Polynomial& a, const Polynomial& b) {
    if (a.value_dim != 1 || b.value_dim != 1)
        throw std::invalid_argument("poly_product: scalar polynomials only");
    Polynomial out;
    out.value_dim = 1;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms) {
            // merge factor lists
            std::map<int, int> pow;
            for (auto& [v, p] : ma.factors) pow[v] += p;
            for (auto& [v, p] : mb.factors) pow[v] += p;
            Monomial m;
            for (auto& [v, p] : pow) m.factors.emplace_back(v, p);
            out.add_term(m, {ca[0] * cb[0]});
        }
    out.canonicalize();
    return out;
}

Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& subs) {
    Polynomial out = Polynomial::zero(p.value_dim);
    for (auto& [m, c] : p.terms) {
        Polynomial mono = Polynomial::constant({1.0});
        for (auto& [v, pw] : m.factors) {
            if (v >= static_cast<int>(subs.size()))
                throw std::invalid_argument("substitute: missing substitution for a variable");
            for (int i = 0; i < pw; ++i) mono = poly_product(mono, subs[v]);
        }
        for (auto& [mm, mc] : mono.terms) {
            std::vector<double> cc(c);
            for (double& x : cc) x *= mc[0];
            out.add_term(mm, cc);
        }
    }
    out.canonicalize();
    return out;
}

void GaussianBlockInstance::validate() const {
    if (blocks < 1 || order < 1) throw std::invalid_argument("GaussianBlockInstance: need blocks, order >= 1");
    if (static_cast<int>(coeffs.size()) != blocks * order)
        throw std::invalid_argument("GaussianBlockInstance: coefficient count must be blocks*order");
    for (int j = 0; j < blocks * order; ++j) {
        const Polynomial& p = coeffs[j];
        if (p.value_dim != value_dim)
            throw std::invalid_argument("GaussianBlockInstance: coefficient value_dim mismatch");
        int block = j / order;
        if (p.max_variable() >= block * order)
            throw std::invalid_argument("GaussianBlockInstance: coefficient " + std::to_string(j) +
                                        " depends on variables of its own or later blocks");
        if (p.total_degree() > degree_cap)
            throw std::invalid_argument("GaussianBlockInstance: degree cap exceeded");
    }
}

namespace {

struct EvalPlan {
    std::vector<int> used_vars;       // global var index per quadrature axis
    std::vector<int> nontrivial;      // coefficient slots with nonzero polys
};

EvalPlan make_plan(const GaussianBlockInstance& inst, const TransformMatrix& a) {
    EvalPlan plan;
    std::vector<bool> used(static_cast<std::size_t>(inst.blocks) * inst.order, false);
    for (int j = 0; j < inst.blocks * inst.order; ++j) {
        if (inst.coeffs[j].is_zero()) continue;
        plan.nontrivial.push_back(j);
        for (auto& [m, c] : inst.coeffs[j].terms)
            for (auto& [v, p] : m.factors) used[v] = true;
        used[j] = true; // the plain side multiplies phi_j
        // the transformed side touches the block variables with nonzero A row
        int block = j / inst.order, l = j % inst.order;
        for (int mcol = 0; mcol < inst.order; ++mcol)
            if (a.at(l, mcol) != 0.0) used[block * inst.order + mcol] = true;
    }
    for (std::size_t v = 0; v < used.size(); ++v)
        if (used[v]) plan.used_vars.push_back(static_cast<int>(v));
    return plan;
}

struct PairAccum {
    double num = 0.0, den = 0.0;
};

// evaluates |A-transform|^p and |plain|^p at one Gaussian point
void eval_point(const GaussianBlockInstance& inst, const TransformMatrix& a, double p,
                const OperatorMatrix* s, const std::vector<int>& slots, const double* phi,
                double& num_term, double& den_term) {
    const int d = inst.order;
    const int m_out = s ? s->rows : inst.value_dim;
    std::vector<double> num(m_out, 0.0), den(inst.value_dim, 0.0);
    for (int j : slots) {
        std::vector<double> dj = inst.coeffs[j].eval(phi);
        int block = j / d, l = j % d;
        double contraction = 0.0;
        for (int c = 0; c < d; ++c) contraction += a.at(l, c) * phi[block * d + c];
        if (s) {
            std::vector<double> sd = s->apply(dj);
            for (int c = 0; c < m_out; ++c) num[c] += sd[c] * contraction;
        } else {
            for (int c = 0; c < m_out; ++c) num[c] += dj[c] * contraction;
        }
        for (int c = 0; c < inst.value_dim; ++c) den[c] += dj[c] * phi[j];
    }
    const VectorNorm in_norm = s ? s->input_norm : VectorNorm::L2;
    const VectorNorm out_norm = s ? s->output_norm : VectorNorm::L2;
    double nv = (m_out == 1) ? std::abs(num[0]) : coord_norm(num, out_norm);
    double dv = (inst.value_dim == 1) ? std::abs(den[0]) : coord_norm(den, in_norm);
    num_term = std::pow(nv, p);
    den_term = std::pow(dv, p);
}

bool is_even_integer(double p) {
    double r = std::round(p);
    return std::abs(p - r) < 1e-12 && static_cast<long>(r) % 2 == 0;
}

} // namespace

GaussRatioReport gaussian_block_ratio(const GaussianBlockInstance& inst, const TransformMatrix& a,
                                      double p, const GaussEval& eval, const OperatorMatrix* s) {
    inst.validate();
    if (a.dim != inst.order) throw std::invalid_argument("gaussian_block_ratio: matrix order mismatch");
    if (!(p > 1.0)) throw std::invalid_argument("gaussian_block_ratio: p must be > 1");
    if (s && s->cols != inst.value_dim)
        throw std::invalid_argument("gaussian_block_ratio: operator input dimension mismatch");

    EvalPlan plan = make_plan(inst, a);
    if (plan.nontrivial.empty()) throw std::domain_error("gaussian_block_ratio: degenerate instance");
    const int nvars = static_cast<int>(plan.used_vars.size());
    const int total_vars = inst.blocks * inst.order;
    GaussRatioReport rep;

    if (!eval.monte_carlo) {
        int nodes;
        if (is_even_integer(p)) {
            // summands have per-axis degree <= cap+1; exactness for |sum|^p
            int deg = static_cast<int>(std::llround(p)) * (inst.degree_cap + 1);
            nodes = deg / 2 + 1;
        } else {
            if (nvars > 4)
                throw std::invalid_argument(
                    "gaussian_block_ratio: quadrature for non-even p needs <= 4 active variables");
            nodes = 40;
        }
        double count = std::pow(static_cast<double>(nodes), nvars);
        if (count > 6e7)
            throw std::invalid_argument("gaussian_block_ratio: quadrature grid too large; use monte_carlo");
        QuadRule gh = gauss_hermite_normal(nodes);
        std::vector<double> phi(total_vars, 0.0);
        std::vector<int> digit(nvars, 0);
        double num = 0.0, den = 0.0;
        bool done = nvars == 0;
        if (nvars == 0) {
            // constant coefficients with no used variables cannot happen:
            // plan marks phi_j used for every nonzero slot
            throw std::logic_error("gaussian_block_ratio: empty quadrature plan");
        }
        while (!done) {
            double w = 1.0;
            for (int i = 0; i < nvars; ++i) {
                phi[plan.used_vars[i]] = gh.nodes[digit[i]];
                w *= gh.weights[digit[i]];
            }
            double nt, dt;
            eval_point(inst, a, p, s, plan.nontrivial, phi.data(), nt, dt);
            num += w * nt;
            den += w * dt;
            int pos = 0;
            while (pos < nvars) {
                if (++digit[pos] < nodes) break;
                digit[pos++] = 0;
            }
            done = pos == nvars;
        }
        rep.numerator = std::pow(num, 1.0 / p);
        rep.denominator = std::pow(den, 1.0 / p);
        if (rep.denominator == 0.0) throw std::domain_error("gaussian_block_ratio: degenerate instance");
        rep.ratio = rep.numerator / rep.denominator;
        rep.samples = static_cast<long>(count);
    } else {
        rep.monte_carlo = true;
        const long per_batch = std::max<long>(1, eval.samples / eval.batches);
        std::vector<double> batch_ratios;
        double num_all = 0.0, den_all = 0.0;
        for (int b = 0; b < eval.batches; ++b) {
            Rng rng(eval.seed, static_cast<std::uint64_t>(b) + 1);
            double num = 0.0, den = 0.0;
            std::vector<double> phi(total_vars, 0.0);
            for (long i = 0; i < per_batch; ++i) {
                for (int v : plan.used_vars) phi[v] = rng.normal();
                double nt, dt;
                eval_point(inst, a, p, s, plan.nontrivial, phi.data(), nt, dt);
                num += nt;
                den += dt;
            }
            num_all += num;
            den_all += den;
            if (den > 0.0) batch_ratios.push_back(std::pow(num / den, 1.0 / p));
        }
        if (den_all == 0.0) throw std::domain_error("gaussian_block_ratio: degenerate instance");
        rep.numerator = std::pow(num_all / (per_batch * eval.batches), 1.0 / p);
        rep.denominator = std::pow(den_all / (per_batch * eval.batches), 1.0 / p);
        rep.ratio = rep.numerator / rep.denominator;
        double mean = 0.0;
        for (double r : batch_ratios) mean += r;
        mean /= batch_ratios.size();
        double var = 0.0;
        for (double r : batch_ratios) var += (r - mean) * (r - mean);
        var /= std::max<std::size_t>(1, batch_ratios.size() - 1);
        rep.stderr_est = std::sqrt(var / batch_ratios.size());
        rep.samples = per_batch * eval.batches;
    }
    return rep;
}

std::pair<std::vector<double>, std::vector<double>> transform_values_at(
    const GaussianBlockInstance& inst, const TransformMatrix& a, const double* phi) {
    const int d = inst.order;
    std::vector<double> num(inst.value_dim, 0.0), den(inst.value_dim, 0.0);
    for (int j = 0; j < inst.blocks * d; ++j) {
        if (inst.coeffs[j].is_zero()) continue;
        std::vector<double> dj = inst.coeffs[j].eval(phi);
        int block = j / d, l = j % d;
        double contraction = 0.0;
        for (int c = 0; c < d; ++c) contraction += a.at(l, c) * phi[block * d + c];
        for (int c = 0; c < inst.value_dim; ++c) {
            num[c] += dj[c] * contraction;
            den[c] += dj[c] * phi[j];
        }
    }
    return {num, den};
}

GaussianBlockInstance conjugation_transport(const GaussianBlockInstance& inst,
                                            const TransformMatrix& u) {
    inst.validate();
    if (u.dim != inst.order) throw std::invalid_argument("conjugation_transport: order mismatch");
    TransformMatrix utu = u.transpose().times(u);
    if (utu.max_abs_diff(TransformMatrix::identity(u.dim)) > 1e-12)
        throw std::domain_error("conjugation_transport: matrix is not orthogonal");

    const int d = inst.order;
    const int total = inst.blocks * d;
    // phi_v = sum_j U_{j,l} psi_{b d + j} for v = b d + l  (phi = U^T psi blockwise)
    std::vector<Polynomial> subs(total);
    for (int v = 0; v < total; ++v) {
        int b = v / d, l = v % d;
        Polynomial lin = Polynomial::zero(1);
        for (int j = 0; j < d; ++j) {
            if (u.at(j, l) == 0.0) continue;
            lin += Polynomial::variable(b * d + j).scaled(u.at(j, l));
        }
        subs[v] = lin;
    }
    GaussianBlockInstance out = inst;
    // d'_block = U (d_block o substitution)
    for (int b = 0; b < inst.blocks; ++b) {
        std::vector<Polynomial> substituted(d);
        for (int l = 0; l < d; ++l) substituted[l] = substitute(inst.coeffs[b * d + l], subs);
        for (int l = 0; l < d; ++l) {
            Polynomial acc = Polynomial::zero(inst.value_dim);
            for (int m = 0; m < d; ++m) {
                if (u.at(l, m) == 0.0) continue;
                Polynomial scaled = substituted[m];
                for (auto& [mono, c] : scaled.terms)
                    for (double& x : c) x *= u.at(l, m);
                acc += scaled;
            }
            out.coeffs[b * d + l] = acc;
        }
    }
    out.validate();
    return out;
}

GaussianBlockInstance tensor_embed(const GaussianBlockInstance& inst, int m) {
    inst.validate();
    if (m < 1) throw std::invalid_argument("tensor_embed: M must be >= 1");
    if (m == 1) return inst;
    const int d = inst.order;
    GaussianBlockInstance out;
    out.blocks = inst.blocks;
    out.order = d * m;
    out.value_dim = inst.value_dim;
    out.degree_cap = inst.degree_cap;
    out.coeffs.assign(static_cast<std::size_t>(out.blocks) * out.order,
                      Polynomial::zero(inst.value_dim));
    // old variable b*d + l lives at new index b*(d*m) + l; other slots stay zero
    const int total = inst.blocks * d;
    std::vector<Polynomial> subs(total);
    for (int v = 0; v < total; ++v) {
        int b = v / d, l = v % d;
        subs[v] = Polynomial::variable(b * d * m + l);
    }
    for (int j = 0; j < total; ++j) {
        int b = j / d, l = j % d;
        out.coeffs[static_cast<std::size_t>(b) * out.order + l] = substitute(inst.coeffs[j], subs);
    }
    out.validate();
    return out;
}

GaussianBlockInstance augment_to(const GaussianBlockInstance& inst, const TransformMatrix& c,
                                 const std::vector<int>& indices) {
    inst.validate();
    const int dprime = inst.order;
    const int d = c.dim;
    if (static_cast<int>(indices.size()) != dprime)
        throw std::invalid_argument("augment_to: index set size must equal the instance order");
    TransformMatrix b = submatrix(c, indices);
    // structural conditions: C restricted to I equals the instance matrix's
    // role (checked by the caller against its B), and rows at I vanish off I
    std::vector<bool> in_set(d, false);
    for (int i : indices) in_set[i] = true;
    for (int l : indices)
        for (int k = 0; k < d; ++k)
            if (!in_set[k] && std::abs(c.at(l, k)) > 1e-12)
                throw std::domain_error("augment_to: rows of C at I must vanish outside I");

    GaussianBlockInstance out;
    out.blocks = inst.blocks;
    out.order = d;
    out.value_dim = inst.value_dim;
    out.degree_cap = inst.degree_cap;
    out.coeffs.assign(static_cast<std::size_t>(out.blocks) * d, Polynomial::zero(inst.value_dim));
    const int total = inst.blocks * dprime;
    std::vector<Polynomial> subs(total);
    for (int v = 0; v < total; ++v) {
        int blk = v / dprime, l = v % dprime;
        subs[v] = Polynomial::variable(blk * d + indices[l]);
    }
    for (int j = 0; j < total; ++j) {
        int blk = j / dprime, l = j % dprime;
        out.coeffs[static_cast<std::size_t>(blk) * d + indices[l]] = substitute(inst.coeffs[j], subs);
    }
    out.validate();
    (void)b;
    return out;
}

GaussianBlockInstance gaussianize_walsh(const WalshPaleyInstance& wp,
                                        const std::vector<double>& alpha) {
    wp.validate();
    if (wp.value_dim != 1) throw std::invalid_argument("gaussianize_walsh: scalar instances only");
    if (static_cast<int>(alpha.size()) != wp.depth)
        throw std::invalid_argument("gaussianize_walsh: alpha length mismatch");
    GaussianBlockInstance out;
    out.blocks = wp.depth;
    out.order = 2;
    out.value_dim = 1;
    out.degree_cap = std::max(3, wp.depth); // multilinear terms can reach depth-1
    out.coeffs.assign(static_cast<std::size_t>(wp.depth) * 2, Polynomial::zero(1));
    // level k goes to slot 0 (transforms with +1 under A_s) when alpha_k = +1,
    // slot 1 (transforms with -1) otherwise; eps_j becomes the Gaussian that
    // carried level j
    std::vector<int> slot(wp.depth);
    for (int k = 0; k < wp.depth; ++k) slot[k] = alpha[k] >= 0.0 ? 0 : 1;
    for (int k = 0; k < wp.depth; ++k) {
        std::vector<double> ml = multilinear_coeffs(wp, k + 1);
        Polynomial poly = Polynomial::zero(1);
        for (std::size_t mask = 0; mask < ml.size(); ++mask) {
            if (ml[mask] == 0.0) continue;
            Monomial mono;
            for (int j = 0; j < k; ++j)
                if ((mask >> j) & 1u) mono.factors.emplace_back(j * 2 + slot[j], 1);
            poly.add_term(mono, {ml[mask]});
        }
        poly.canonicalize();
        out.coeffs[static_cast<std::size_t>(k) * 2 + slot[k]] = poly;
    }
    out.validate();
    return out;
}

CltReport clt_block_average(int block_len, long samples, std::uint64_t seed) {
    if (block_len < 1) throw std::invalid_argument("clt_block_average: block length must be >= 1");
    if (samples < 2) throw std::invalid_argument("clt_block_average: need at least 2 samples");
    CltReport rep;
    rep.samples = samples;
    const double scale = 1.0 / std::sqrt(block_len / 2.0);
    double sum_s = 0, sum_c = 0, sum_ss = 0, sum_cc = 0, sum_sc = 0, sum_s4 = 0;
    Rng rng(seed, 0);
    for (long i = 0; i < samples; ++i) {
        double s = 0.0, c = 0.0;
        for (int j = 0; j < block_len; ++j) {
            double t = rng.uniform(-M_PI, M_PI);
            s += std::sin(t);
            c += std::cos(t);
        }
        s *= scale;
        c *= scale;
        sum_s += s;
        sum_c += c;
        sum_ss += s * s;
        sum_cc += c * c;
        sum_sc += s * c;
        sum_s4 += s * s * s * s;
    }
    const double n = static_cast<double>(samples);
    rep.mean_s = sum_s / n;
    rep.mean_c = sum_c / n;
    rep.var_s = sum_ss / n - rep.mean_s * rep.mean_s;
    rep.var_c = sum_cc / n - rep.mean_c * rep.mean_c;
    rep.cov_sc = sum_sc / n - rep.mean_s * rep.mean_c;
    rep.max_cov_dev = std::max({std::abs(rep.var_s - 1.0), std::abs(rep.var_c - 1.0),
                                std::abs(rep.cov_sc)});
    double m2 = sum_ss / n;
    rep.kurtosis_s = (sum_s4 / n) / (m2 * m2);
    return rep;
}

} // namespace umdlab
