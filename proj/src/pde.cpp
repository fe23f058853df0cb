#include "vardom/pde.hpp"
#include "vardom/poincare.hpp"
#include "vardom/util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vardom {

EllipticProblem EllipticProblem::poisson(const DomainMask& mask,
                                         const std::function<double(double, double)>& f_fn,
                                         const std::function<double(double, double)>& g_fn,
                                         double tolerance) {
    EllipticProblem prob;
    prob.mask = mask;
    prob.tolerance = tolerance;
    const auto& spec = mask.spec();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    prob.g_full.assign(static_cast<std::size_t>(spec.cell_count()), 0.0);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            const double x = spec.center(0, i);
            const double y = spec.dim == 2 ? spec.center(1, j) : 0.0;
            if (mask.inside(i, j))
                prob.f.push_back(f_fn(x, y));
            else
                prob.g_full[static_cast<std::size_t>(spec.index(i, j))] = g_fn(x, y);
        }
    return prob;
}

namespace {

// Masked 5-point operator with Dirichlet faces: an outside (or off-grid)
// neighbor contributes 2 u(c) / h^2, with 2 g / h^2 moved to the right-hand
// side. Indexing is over inside cells in mask row-major order.
class DirichletOperator {
public:
    DirichletOperator(const DomainMask& m, const std::vector<double>& g_full) {
        const auto& spec = m.spec();
        const int n0 = spec.shape[0];
        const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
        const double inv_h2 = 1.0 / (spec.spacing * spec.spacing);
        inv_h2_ = inv_h2;
        std::vector<std::int64_t> cell_to_idx(static_cast<std::size_t>(spec.cell_count()), -1);
        std::int64_t k = 0;
        for (std::int64_t c = 0; c < spec.cell_count(); ++c)
            if (m.inside(c)) cell_to_idx[static_cast<std::size_t>(c)] = k++;
        n_ = k;
        nbr_.assign(static_cast<std::size_t>(n_) * 4, -1);
        diag_.assign(static_cast<std::size_t>(n_), 0.0);
        bc_.assign(static_cast<std::size_t>(n_), 0.0);
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                if (!m.inside(i, j)) continue;
                const std::int64_t row = cell_to_idx[static_cast<std::size_t>(spec.index(i, j))];
                const int dirs = spec.dim == 2 ? 4 : 2;
                const std::array<std::array<int, 2>, 4> nb{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
                int slot = 0;
                double diag = 0.0, bc = 0.0;
                for (int d = 0; d < dirs; ++d) {
                    const auto& q = nb[static_cast<std::size_t>(d)];
                    const bool on_grid = q[0] >= 0 && q[0] < n0 && q[1] >= 0 && q[1] < n1;
                    if (on_grid && m.inside(q[0], q[1])) {
                        nbr_[static_cast<std::size_t>(row) * 4 + slot] =
                            cell_to_idx[static_cast<std::size_t>(spec.index(q[0], q[1]))];
                        ++slot;
                        diag += 1.0;
                    } else {
                        diag += 2.0; // Dirichlet face halfway to the ghost center
                        bc += 2.0 * (on_grid ? g_full[static_cast<std::size_t>(spec.index(q[0], q[1]))] : 0.0);
                    }
                }
                diag_[static_cast<std::size_t>(row)] = diag * inv_h2;
                bc_[static_cast<std::size_t>(row)] = bc * inv_h2;
            }
        }
    }

    std::int64_t size() const { return n_; }
    const std::vector<double>& bc_rhs() const { return bc_; }

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (std::int64_t r = 0; r < n_; ++r) {
            double acc = diag_[static_cast<std::size_t>(r)] * x[static_cast<std::size_t>(r)];
            for (int s = 0; s < 4; ++s) {
                const std::int64_t q = nbr_[static_cast<std::size_t>(r) * 4 + s];
                if (q < 0) break;
                acc -= inv_h2_ * x[static_cast<std::size_t>(q)];
            }
            y[static_cast<std::size_t>(r)] = acc;
        }
    }

private:
    std::int64_t n_ = 0;
    std::vector<std::int64_t> nbr_;
    std::vector<double> diag_;
    std::vector<double> bc_;
    double inv_h2_ = 1.0;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

} // namespace

Field solve_dirichlet(const EllipticProblem& prob) {
    const auto& m = prob.mask;
    if (m.empty()) throw std::invalid_argument("solve_dirichlet: empty mask");
    if (static_cast<std::int64_t>(prob.f.size()) != m.inside_count())
        throw std::invalid_argument("solve_dirichlet: rhs size mismatch");
    if (!prob.allow_disconnected && !is_connected(m))
        throw std::invalid_argument("solve_dirichlet: disconnected mask");

    for (double v : prob.f)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_dirichlet: non-finite rhs");
    for (double v : prob.g_full)
        if (!std::isfinite(v))
            throw std::invalid_argument("solve_dirichlet: non-finite boundary data");

    const DirichletOperator op(m, prob.g_full);
    const std::size_t n = static_cast<std::size_t>(op.size());
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = prob.f[i] + op.bc_rhs()[i];

    const double b2 = dot(b, b);
    std::vector<double> u(n, 0.0);
    if (b2 == 0.0) return Field(m, std::move(u));

    std::vector<double> r = b, d = b, q(n);
    double rho = b2;
    const double target = prob.tolerance * prob.tolerance * b2;
    const std::int64_t cap =
        40 * static_cast<std::int64_t>(std::sqrt(static_cast<double>(n))) + 16;
    std::int64_t it = 0;
    while (rho > target && it < cap) {
        op.apply(d, q);
        const double alpha = rho / dot(d, q);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += alpha * d[i];
            r[i] -= alpha * q[i];
        }
        const double rho_next = dot(r, r);
        const double beta = rho_next / rho;
        for (std::size_t i = 0; i < n; ++i) d[i] = r[i] + beta * d[i];
        rho = rho_next;
        ++it;
    }
    if (!(rho <= target))
        throw SolverError("solve_dirichlet: CG did not reach tolerance within " +
                          std::to_string(cap) + " iterations");
    return Field(m, std::move(u));
}

double dirichlet_energy(const Field& u) {
    const auto g = gradient(u);
    const double vol = u.domain().spec().cell_volume();
    double acc = 0.0;
    for (int a = 0; a < g.axes(); ++a)
        for (double v : g.component(a)) acc += v * v;
    return acc * vol;
}

double weak_residual(const Field& u, const EllipticProblem& prob, const TestDictionary& bumps) {
    const auto& m = u.domain();
    const auto& spec = m.spec();
    if (!(m == prob.mask)) throw std::invalid_argument("weak_residual: field/problem mask mismatch");
    for (const auto& b : bumps.bumps())
        if (!TestDictionary::support_inside(b, m))
            throw std::invalid_argument("weak_residual: bump support not inside mask");

    const double h = spec.spacing;
    const double vol = spec.cell_volume();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    const auto gu = gradient(u);
    const auto f_full = Field(m, prob.f).scatter();

    double worst = 0.0;
    for (const auto& b : bumps.bumps()) {
        const auto phi = bumps.sample(b);
        double acc = 0.0;
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                const std::size_t c = static_cast<std::size_t>(spec.index(i, j));
                // energy pairing over stencil cells
                if (gu.stencil(0)[c] && i + 1 < n0) {
                    const double dphi = (phi[static_cast<std::size_t>(spec.index(i + 1, j))] - phi[c]) / h;
                    acc += gu.component(0)[c] * dphi;
                }
                if (spec.dim == 2 && gu.stencil(1)[c] && j + 1 < n1) {
                    const double dphi = (phi[static_cast<std::size_t>(spec.index(i, j + 1))] - phi[c]) / h;
                    acc += gu.component(1)[c] * dphi;
                }
                acc -= f_full[c] * phi[c];
            }
        }
        worst = std::max(worst, std::abs(acc * vol));
    }
    return worst;
}

double default_end_profile(double y) {
    if (std::abs(y) >= 0.5) return 0.0;
    const double c = std::cos(M_PI * y);
    return c * c * c * c;
}

namespace {

std::function<double(double, double)> channel_end_data(const std::function<double(double)>& profile) {
    return [profile](double x, double y) {
        if (x <= 0.0 || x >= 1.0) return profile(y);
        return 0.0; // graph walls
    };
}

} // namespace

ShapeSearchResult shape_search(const ShapeFamily& family,
                               const std::function<double(double)>& end_profile,
                               std::optional<double> lambda) {
    if (family.params.empty()) throw std::invalid_argument("shape_search: empty family");
    ShapeSearchResult res;
    res.lambda = lambda.value_or(family.drag_weight);
    const auto g_fn = channel_end_data(end_profile);

    std::vector<std::optional<Field>> solutions(family.params.size());
    for (std::size_t ci = 0; ci < family.params.size(); ++ci) {
        const double c = family.params[ci];
        ShapeCandidateRow row;
        row.c = c;
        row.price = family.price(c);
        try {
            const DomainMask mask = channel_mask(family.grid, family.radius_of(c));
            row.measure = measure(mask);
            auto prob = EllipticProblem::poisson(mask, [](double, double) { return 0.0; }, g_fn,
                                                 family.tolerance);
            Field u = solve_dirichlet(prob);
            row.drag = dirichlet_energy(u);
            row.objective = row.drag + res.lambda * row.price;
            solutions[ci] = std::move(u);
        } catch (const std::exception& e) {
            row.failed = true;
            row.note = e.what();
        }
        res.table.push_back(std::move(row));
    }

    for (std::size_t ci = 0; ci < res.table.size(); ++ci) {
        const auto& row = res.table[ci];
        if (row.failed) continue;
        if (res.best_index < 0 || row.objective < res.table[static_cast<std::size_t>(res.best_index)].objective) {
            res.best_index = static_cast<int>(ci);
        }
    }
    if (res.best_index < 0) throw SolverError("shape_search: every candidate solve failed");
    res.best_c = res.table[static_cast<std::size_t>(res.best_index)].c;
    res.solution = *solutions[static_cast<std::size_t>(res.best_index)];
    return res;
}

LscResult lsc_check(const std::vector<DomainMask>& seq, const DomainMask& limit,
                    const std::function<double(double, double)>& f_fn,
                    const std::function<double(double, double)>& g_fn, const LscOptions& opts) {
    if (seq.empty()) throw std::invalid_argument("lsc_check: empty sequence");
    LscResult res;

    auto solve_energy = [&](const DomainMask& m, bool allow_disconnected) {
        auto prob = EllipticProblem::poisson(m, f_fn, g_fn, opts.solver_tolerance);
        prob.allow_disconnected = allow_disconnected;
        return dirichlet_energy(solve_dirichlet(prob));
    };

    res.member_energy.resize(seq.size());
    parallel_for(static_cast<int>(seq.size()), [&](int i) {
        res.member_energy[static_cast<std::size_t>(i)] = solve_energy(seq[static_cast<std::size_t>(i)], false);
    });
    // the limit of a pinching family may rasterize disconnected; the energies
    // of its components are still well-defined
    res.limit_energy = solve_energy(limit, true);
    if (!is_connected(limit)) res.notes += "limit mask is disconnected; ";

    const std::size_t tail =
        seq.size() - std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(opts.tail_fraction * seq.size())));
    res.min_tail_energy = res.member_energy[tail];
    for (std::size_t i = tail; i < seq.size(); ++i)
        res.min_tail_energy = std::min(res.min_tail_energy, res.member_energy[i]);
    res.tol = opts.tol_fraction * res.limit_energy;
    res.holds = res.limit_energy <= res.min_tail_energy + res.tol;

    if (opts.with_poincare) {
        for (const auto& m : seq) {
            if (is_connected(m))
                res.poincare_constants.push_back(poincare_constant_22(m).constant);
            else
                res.poincare_constants.push_back(
                    poincare_lower_bound(m, 2.0, 2.0, 50).constant);
        }
        bool rising = true;
        for (std::size_t i = 1; i < res.poincare_constants.size(); ++i)
            if (res.poincare_constants[i] < 0.99 * res.poincare_constants[i - 1]) rising = false;
        if (rising && res.poincare_constants.back() > 1.25 * res.poincare_constants.front()) {
            res.poincare_degraded = true;
            res.notes += "oscillation constants rise monotonically by more than 25% along the "
                         "sequence; ";
        }
    }
    return res;
}

} // namespace vardom
