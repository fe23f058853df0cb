#include "vardom/poincare.hpp"
#include "vardom/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vardom {

namespace {

// Neumann graph Laplacian on the inside cells, scaled by 1/h^2. Values are
// indexed by mask row-major inside order.
class NeumannLaplacian {
public:
    explicit NeumannLaplacian(const DomainMask& m) {
        const auto& spec = m.spec();
        const int n0 = spec.shape[0];
        const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
        std::vector<std::int64_t> cell_to_idx(static_cast<std::size_t>(spec.cell_count()), -1);
        std::int64_t k = 0;
        for (std::int64_t c = 0; c < spec.cell_count(); ++c)
            if (m.inside(c)) cell_to_idx[static_cast<std::size_t>(c)] = k++;
        n_ = k;
        nbr_.assign(static_cast<std::size_t>(n_) * 4, -1);
        degree_.assign(static_cast<std::size_t>(n_), 0);
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                if (!m.inside(i, j)) continue;
                const std::int64_t row = cell_to_idx[static_cast<std::size_t>(spec.index(i, j))];
                const std::array<std::array<int, 2>, 4> nb{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
                int d = 0, slot = 0;
                for (const auto& q : nb) {
                    if (q[0] >= 0 && q[0] < n0 && q[1] >= 0 && q[1] < n1 && m.inside(q[0], q[1])) {
                        nbr_[static_cast<std::size_t>(row) * 4 + slot] =
                            cell_to_idx[static_cast<std::size_t>(spec.index(q[0], q[1]))];
                        ++slot;
                        ++d;
                    }
                }
                degree_[static_cast<std::size_t>(row)] = d;
            }
        }
        inv_h2_ = 1.0 / (spec.spacing * spec.spacing);
    }

    std::int64_t size() const { return n_; }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (std::int64_t r = 0; r < n_; ++r) {
            double acc = degree_[static_cast<std::size_t>(r)] * x[static_cast<std::size_t>(r)];
            for (int s = 0; s < 4; ++s) {
                const std::int64_t q = nbr_[static_cast<std::size_t>(r) * 4 + s];
                if (q < 0) break;
                acc -= x[static_cast<std::size_t>(q)];
            }
            y[static_cast<std::size_t>(r)] = acc * inv_h2_;
        }
    }

private:
    std::int64_t n_ = 0;
    std::vector<std::int64_t> nbr_; // up to 4 neighbor indices, packed, -1 terminated
    std::vector<int> degree_;
    double inv_h2_ = 1.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

void project_mean(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

// CG for L y = b on the mean-zero subspace (L is positive definite there).
// y0 carries the warm start.
void cg_meanfree(const NeumannLaplacian& op, const std::vector<double>& b, std::vector<double>& y,
                 double rel_tol, std::int64_t max_iter) {
    const std::size_t n = b.size();
    std::vector<double> r(n), q(n), d(n);
    op.apply(y, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    project_mean(r);
    d = r;
    double rho = dot(r, r);
    const double target = rel_tol * rel_tol * dot(b, b);
    std::int64_t it = 0;
    while (rho > target && it < max_iter) {
        op.apply(d, q);
        const double alpha = rho / dot(d, q);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += alpha * d[i];
            r[i] -= alpha * q[i];
        }
        if (it % 64 == 0) project_mean(r);
        const double rho_next = dot(r, r);
        const double beta = rho_next / rho;
        for (std::size_t i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
        rho = rho_next;
        ++it;
    }
    if (rho > target)
        throw SolverError("poincare: inner CG did not converge in " + std::to_string(max_iter) +
                          " iterations");
    project_mean(y);
}

// Smooth split profile along the longest bounding-box axis: a good first
// guess for the slowest Neumann mode, and nearly the exact one on pinched
// geometries.
std::vector<double> split_seed(const DomainMask& m) {
    const auto& spec = m.spec();
    double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (m.inside(i, j)) {
                lo[0] = std::min(lo[0], spec.center(0, i));
                hi[0] = std::max(hi[0], spec.center(0, i));
                if (spec.dim == 2) {
                    lo[1] = std::min(lo[1], spec.center(1, j));
                    hi[1] = std::max(hi[1], spec.center(1, j));
                }
            }
    int axis = 0;
    if (spec.dim == 2 && hi[1] - lo[1] > hi[0] - lo[0]) axis = 1;
    const double mid = 0.5 * (lo[axis] + hi[axis]);
    const double len = std::max(hi[axis] - lo[axis], spec.spacing);

    std::vector<double> seed;
    seed.reserve(static_cast<std::size_t>(m.inside_count()));
    std::uint64_t salt = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (m.inside(i, j)) {
                const double t = (spec.center(axis, axis == 0 ? i : j) - mid) / (0.1 * len);
                salt = salt * 6364136223846793005ull + 1442695040888963407ull;
                const double jitter = 1e-3 * (static_cast<double>(salt >> 11) / 9.007199254740992e15 - 0.5);
                seed.push_back(std::tanh(t) + jitter);
            }
    return seed;
}

} // namespace

PoincareEstimate poincare_constant_22(const DomainMask& m, double rel_tol, int max_iterations) {
    if (m.inside_count() < 2)
        throw std::invalid_argument("poincare_constant_22: need at least 2 inside cells");
    if (!is_connected(m))
        throw std::invalid_argument("poincare_constant_22: disconnected mask");

    const NeumannLaplacian op(m);
    const std::size_t n = static_cast<std::size_t>(op.size());
    std::vector<double> x = split_seed(m);
    project_mean(x);
    double nx = std::sqrt(dot(x, x));
    for (double& v : x) v /= nx;

    std::vector<double> y(n, 0.0), tmp(n);
    double lambda = 0.0, lambda_prev = -1.0;
    const std::int64_t cg_cap = 400 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(n))) + 2000;
    int it = 0;
    for (; it < max_iterations; ++it) {
        // warm start: y ~ x / lambda
        if (lambda > 0.0)
            for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / lambda;
        cg_meanfree(op, x, y, 1e-11, cg_cap);
        op.apply(y, tmp);
        lambda = dot(y, tmp) / dot(y, y);
        const double ny = std::sqrt(dot(y, y));
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
        project_mean(x);
        if (lambda_prev > 0.0 && std::abs(lambda - lambda_prev) <= rel_tol * lambda) break;
        lambda_prev = lambda;
    }
    if (it == max_iterations)
        throw SolverError("poincare_constant_22: inverse iteration did not converge");

    PoincareEstimate est;
    est.q = est.p = 2.0;
    est.constant = 1.0 / std::sqrt(lambda);
    est.method = "eigen";
    est.domain_measure = measure(m);
    return est;
}

namespace {

struct Bbox {
    double lo[2];
    double len[2];
};

Bbox inside_bbox(const DomainMask& m) {
    const auto& spec = m.spec();
    Bbox b{{1e300, 1e300}, {0, 0}};
    double hi[2] = {-1e300, -1e300};
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (m.inside(i, j)) {
                b.lo[0] = std::min(b.lo[0], spec.center(0, i));
                hi[0] = std::max(hi[0], spec.center(0, i));
                if (spec.dim == 2) {
                    b.lo[1] = std::min(b.lo[1], spec.center(1, j));
                    hi[1] = std::max(hi[1], spec.center(1, j));
                }
            }
    for (int a = 0; a < 2; ++a) b.len[a] = std::max(hi[a] - b.lo[a], spec.spacing);
    return b;
}

double rayleigh_ratio(const DomainMask& m, const Field& f, double q, double p) {
    const auto& vals = f.values();
    const double n = static_cast<double>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;

    double num = 0.0;
    for (double v : vals) num += std::pow(std::abs(v - mean), q);
    num = std::pow(num / n, 1.0 / q);

    const auto g = gradient(f);
    const auto& spec = m.spec();
    double den = 0.0;
    for (std::int64_t c = 0; c < spec.cell_count(); ++c) {
        if (!m.inside(c)) continue;
        double g2 = 0.0;
        for (int a = 0; a < spec.dim; ++a) {
            const double v = g.component(a)[static_cast<std::size_t>(c)];
            g2 += v * v;
        }
        den += std::pow(g2, p / 2.0);
    }
    den = std::pow(den / n, 1.0 / p);

    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace

PoincareEstimate poincare_lower_bound(const DomainMask& m, double q, double p, int trials,
                                      std::uint64_t seed) {
    if (q < 1.0 || p < 1.0)
        throw std::invalid_argument("poincare_lower_bound: q and p must be >= 1");
    if (m.empty()) throw std::invalid_argument("poincare_lower_bound: empty mask");
    const auto& spec = m.spec();
    const Bbox bb = inside_bbox(m);
    const double h = spec.spacing;

    std::vector<std::function<double(double, double)>> profiles;
    for (int a = 0; a < spec.dim; ++a) {
        profiles.emplace_back([a, bb](double x, double y) {
            return ((a == 0 ? x : y) - bb.lo[a]) / bb.len[a];
        });
        profiles.emplace_back([a, bb](double x, double y) {
            return std::cos(M_PI * ((a == 0 ? x : y) - bb.lo[a]) / bb.len[a]);
        });
        profiles.emplace_back([a, bb, h](double x, double y) {
            const double mid = bb.lo[a] + 0.5 * bb.len[a];
            return std::tanh(((a == 0 ? x : y) - mid) / (2.0 * h));
        });
    }
    if (spec.dim == 2)
        profiles.emplace_back([bb](double x, double y) {
            return std::cos(M_PI * (x - bb.lo[0]) / bb.len[0]) *
                   std::cos(M_PI * (y - bb.lo[1]) / bb.len[1]);
        });

    Rng rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> freq(1, 3);
    for (int t = 0; t < trials; ++t) {
        struct Term {
            double c;
            int kx, ky, sx, sy;
        };
        std::vector<Term> terms;
        for (int m4 = 0; m4 < 4; ++m4)
            terms.push_back({coef(rng), freq(rng), freq(rng), coef(rng) > 0 ? 1 : 0, coef(rng) > 0 ? 1 : 0});
        profiles.emplace_back([terms, bb, dim = spec.dim](double x, double y) {
            double v = 0.0;
            for (const auto& tm : terms) {
                const double tx = M_PI * tm.kx * (x - bb.lo[0]) / bb.len[0];
                double w = tm.sx ? std::cos(tx) : std::sin(tx);
                if (dim == 2) {
                    const double ty = M_PI * tm.ky * (y - bb.lo[1]) / bb.len[1];
                    w *= tm.sy ? std::cos(ty) : std::sin(ty);
                }
                v += tm.c * w;
            }
            return v;
        });
    }

    double best = 0.0;
    bool any = false;
    for (const auto& prof : profiles) {
        const Field f = Field::from_function(m, prof);
        const double r = rayleigh_ratio(m, f, q, p);
        if (std::isinf(r)) {
            best = r;
            any = true;
            break;
        }
        if (r > 0.0) any = true;
        best = std::max(best, r);
    }
    if (!any) throw std::invalid_argument("poincare_lower_bound: all trial gradients vanish");

    PoincareEstimate est;
    est.q = q;
    est.p = p;
    est.constant = best;
    est.method = "rayleigh-search";
    est.domain_measure = measure(m);
    return est;
}

double uniform_sobolev_constant(const std::vector<double>& measures, double poincare_constant,
                                double q, double p) {
    if (measures.empty()) throw std::invalid_argument("uniform_sobolev_constant: empty measure list");
    double sup = 0.0;
    for (double m : measures) {
        if (!(m > 0.0)) throw std::invalid_argument("uniform_sobolev_constant: measures must be positive");
        sup = std::max(sup, std::pow(m, 1.0 / q - 1.0 / p));
    }
    return (poincare_constant + 1.0) * sup;
}

PoincareSequenceResult is_poincare_sequence(const std::vector<DomainMask>& seq, double q, double p,
                                            int budget, std::uint64_t seed) {
    if (seq.empty()) throw std::invalid_argument("is_poincare_sequence: empty sequence");
    PoincareSequenceResult res;
    for (const auto& m : seq) {
        if (q == 2.0 && p == 2.0 && is_connected(m)) {
            res.constants.push_back(poincare_constant_22(m));
        } else {
            res.constants.push_back(poincare_lower_bound(m, q, p, budget, seed));
        }
    }
    // blow-up: an essentially monotone rise by more than a factor 4
    bool monotone = true;
    for (std::size_t i = 1; i < res.constants.size(); ++i)
        if (res.constants[i].constant < 0.9 * res.constants[i - 1].constant) monotone = false;
    const double first = res.constants.front().constant;
    const double last = res.constants.back().constant;
    res.blow_up = monotone && last > 4.0 * first;
    return res;
}

LipschitzCheckResult uniform_lipschitz_check(const std::vector<GraphDomainSpec>& graphs,
                                             double user_bound, int samples) {
    if (graphs.empty()) throw std::invalid_argument("uniform_lipschitz_check: no graph specs");
    if (samples < 2) throw std::invalid_argument("uniform_lipschitz_check: need >= 2 samples");
    LipschitzCheckResult res;
    res.bound = user_bound;
    for (const auto& g : graphs) {
        const double dx = (g.x_hi - g.x_lo) / (samples - 1);
        double thick = 1e300;
        double prev_lo = g.lower(g.x_lo), prev_hi = g.upper(g.x_lo);
        thick = std::min(thick, prev_hi - prev_lo);
        for (int s = 1; s < samples; ++s) {
            const double x = g.x_lo + s * dx;
            const double lo = g.lower(x), hi = g.upper(x);
            res.sup_lipschitz = std::max(res.sup_lipschitz, std::abs(lo - prev_lo) / dx);
            res.sup_lipschitz = std::max(res.sup_lipschitz, std::abs(hi - prev_hi) / dx);
            thick = std::min(thick, hi - lo);
            prev_lo = lo;
            prev_hi = hi;
        }
        res.min_thickness.push_back(thick);
    }
    res.uniform = res.sup_lipschitz <= user_bound;
    res.thinning = res.min_thickness.back() < 0.25 * res.min_thickness.front();
    return res;
}

} // namespace vardom
