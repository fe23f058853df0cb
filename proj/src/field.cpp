#include "vardom/field.hpp"
#include "vardom/dictionary.hpp"
#include "vardom/util.hpp"

#include <cmath>
#include <stdexcept>

namespace vardom {

Field::Field(DomainMask domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != domain_.inside_count())
        throw std::invalid_argument("Field: value count must equal inside cell count");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("Field: values must be finite");
}

Field Field::from_function(const DomainMask& domain,
                           const std::function<double(double, double)>& fn) {
    const auto& spec = domain.spec();
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(domain.inside_count()));
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            if (domain.inside(i, j))
                vals.push_back(fn(spec.center(0, i), spec.dim == 2 ? spec.center(1, j) : 0.0));
    return Field(domain, std::move(vals));
}

Field Field::zeros(const DomainMask& domain) {
    return Field(domain, std::vector<double>(static_cast<std::size_t>(domain.inside_count()), 0.0));
}

std::vector<double> Field::scatter() const {
    std::vector<double> full(static_cast<std::size_t>(domain_.spec().cell_count()), 0.0);
    std::size_t k = 0;
    const auto& flags = domain_.flags();
    for (std::size_t c = 0; c < flags.size(); ++c)
        if (flags[c]) full[c] = values_[k++];
    return full;
}

ExtendedField::ExtendedField(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (static_cast<std::int64_t>(values_.size()) != spec_.cell_count())
        throw std::invalid_argument("ExtendedField: value count must equal cell count");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("ExtendedField: values must be finite");
}

GradientField::GradientField(DomainMask domain, std::vector<std::vector<double>> components,
                             std::vector<std::vector<std::uint8_t>> stencils)
    : domain_(std::move(domain)), components_(std::move(components)), stencils_(std::move(stencils)) {
    const auto n = static_cast<std::size_t>(domain_.spec().cell_count());
    if (components_.size() != stencils_.size() ||
        static_cast<int>(components_.size()) != domain_.spec().dim)
        throw std::invalid_argument("GradientField: one component per axis required");
    for (std::size_t a = 0; a < components_.size(); ++a)
        if (components_[a].size() != n || stencils_[a].size() != n)
            throw std::invalid_argument("GradientField: component arrays must cover the grid");
}

std::int64_t GradientField::stencil_count(int axis) const {
    std::int64_t n = 0;
    for (auto f : stencils_[static_cast<std::size_t>(axis)]) n += f;
    return n;
}

ExtendedField zero_extend(const Field& f) {
    return ExtendedField(f.domain().spec(), f.scatter());
}

Field restrict_to(const ExtendedField& e, const DomainMask& m, double leak_tol, double p) {
    if (!(e.spec() == m.spec())) throw std::invalid_argument("restrict_to: spec mismatch");
    const auto& flags = m.flags();
    const auto& vals = e.values();
    double acc = 0.0;
    for (std::size_t c = 0; c < flags.size(); ++c)
        if (!flags[c]) acc += std::pow(std::abs(vals[c]), p);
    const double leak = std::pow(acc * m.spec().cell_volume(), 1.0 / p);
    if (leak > leak_tol)
        throw SupportLeakageError("restrict_to: support leakage " + format_double(leak) +
                                      " exceeds tolerance " + format_double(leak_tol),
                                  leak);
    std::vector<double> inside;
    inside.reserve(static_cast<std::size_t>(m.inside_count()));
    for (std::size_t c = 0; c < flags.size(); ++c)
        if (flags[c]) inside.push_back(vals[c]);
    return Field(m, std::move(inside));
}

namespace {

double lp_accumulate(const std::vector<double>& vals, double vol, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    if (p == 2.0) {
        for (double v : vals) acc += v * v;
    } else if (p == 1.0) {
        for (double v : vals) acc += std::abs(v);
    } else {
        for (double v : vals) acc += std::pow(std::abs(v), p);
    }
    return std::pow(acc * vol, 1.0 / p);
}

} // namespace

double lp_norm(const Field& f, double p) {
    return lp_accumulate(f.values(), f.domain().spec().cell_volume(), p);
}

double lp_norm(const ExtendedField& e, double p) {
    return lp_accumulate(e.values(), e.spec().cell_volume(), p);
}

double lp_norm_cells(const std::vector<double>& values, const GridSpec& spec, double p) {
    return lp_accumulate(values, spec.cell_volume(), p);
}

GradientField gradient(const Field& f) {
    const auto& m = f.domain();
    const auto& spec = m.spec();
    const double h = spec.spacing;
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    const auto full = f.scatter();

    std::vector<std::vector<double>> comp(static_cast<std::size_t>(spec.dim));
    std::vector<std::vector<std::uint8_t>> sten(static_cast<std::size_t>(spec.dim));
    for (int a = 0; a < spec.dim; ++a) {
        comp[static_cast<std::size_t>(a)].assign(full.size(), 0.0);
        sten[static_cast<std::size_t>(a)].assign(full.size(), 0);
    }
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n1; ++j) {
            if (!m.inside(i, j)) continue;
            const std::size_t c = static_cast<std::size_t>(spec.index(i, j));
            if (i + 1 < n0 && m.inside(i + 1, j)) {
                comp[0][c] = (full[static_cast<std::size_t>(spec.index(i + 1, j))] - full[c]) / h;
                sten[0][c] = 1;
            }
            if (spec.dim == 2 && j + 1 < n1 && m.inside(i, j + 1)) {
                comp[1][c] = (full[static_cast<std::size_t>(spec.index(i, j + 1))] - full[c]) / h;
                sten[1][c] = 1;
            }
        }
    }
    return GradientField(m, std::move(comp), std::move(sten));
}

double wkp_norm(const Field& f, int k, double p) {
    if (k != 0 && k != 1) throw std::invalid_argument("wkp_norm: k must be 0 or 1");
    double n = lp_norm(f, p);
    if (k == 1) {
        const auto g = gradient(f);
        for (int a = 0; a < g.axes(); ++a)
            n += lp_norm_cells(g.component(a), f.domain().spec(), p);
    }
    return n;
}

ExtensionPack w1p_distance_data(const Field& f) {
    ExtensionPack pack;
    pack.value = zero_extend(f);
    const auto g = gradient(f);
    for (int a = 0; a < g.axes(); ++a)
        pack.gradients.emplace_back(f.domain().spec(), g.component(a));
    return pack;
}

double verify_weak_derivative(const Field& u, const GradientField& g, const TestDictionary& dict) {
    const auto& m = u.domain();
    const auto& spec = m.spec();
    if (!(g.domain() == m)) throw std::invalid_argument("verify_weak_derivative: domain mismatch");
    if (dict.bumps().empty()) throw std::invalid_argument("verify_weak_derivative: no bumps supplied");
    for (const auto& b : dict.bumps())
        if (!TestDictionary::support_inside(b, m))
            throw std::invalid_argument("verify_weak_derivative: bump support not inside domain");

    const double h = spec.spacing;
    const double vol = spec.cell_volume();
    const int n0 = spec.shape[0];
    const int n1 = spec.dim == 2 ? spec.shape[1] : 1;
    const auto uext = u.scatter();

    double worst = 0.0;
    for (const auto& b : dict.bumps()) {
        const auto phi = dict.sample(b);
        for (int a = 0; a < spec.dim; ++a) {
            double pairing = 0.0; // int u d_a(phi) + int g_a phi
            for (int i = 0; i < n0; ++i) {
                for (int j = 0; j < n1; ++j) {
                    const std::size_t c = static_cast<std::size_t>(spec.index(i, j));
                    double dphi = -phi[c];
                    if (a == 0 && i + 1 < n0) dphi += phi[static_cast<std::size_t>(spec.index(i + 1, j))];
                    if (a == 1 && j + 1 < n1) dphi += phi[static_cast<std::size_t>(spec.index(i, j + 1))];
                    pairing += uext[c] * (dphi / h);
                    pairing += g.component(a)[c] * phi[c];
                }
            }
            worst = std::max(worst, std::abs(pairing * vol));
        }
    }
    return worst;
}

double symmetric_difference_measure(const DomainMask& a, const DomainMask& b) {
    if (!(a.spec() == b.spec()))
        throw std::invalid_argument("symmetric_difference_measure: spec mismatch");
    std::int64_t n = 0;
    const auto& fa = a.flags();
    const auto& fb = b.flags();
    for (std::size_t c = 0; c < fa.size(); ++c)
        if ((fa[c] != 0) != (fb[c] != 0)) ++n;
    return static_cast<double>(n) * a.spec().cell_volume();
}

} // namespace vardom
