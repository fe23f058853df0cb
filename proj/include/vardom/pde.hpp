#pragma once

#include "vardom/dictionary.hpp"
#include "vardom/field.hpp"
#include "vardom/gallery.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vardom {

/// -Laplace(u) = f with Dirichlet values supplied on the boundary-adjacent
/// outside layer. The wall is taken at the cell face between an inside cell
/// and its ghost, with the stored ghost value as the wall value.
struct EllipticProblem {
    DomainMask mask;
    std::vector<double> f;      // per inside cell
    std::vector<double> g_full; // per grid cell; read only at ghost cells
    double tolerance = 1e-8;
    bool allow_disconnected = false;

    static EllipticProblem poisson(const DomainMask& mask,
                                   const std::function<double(double, double)>& f_fn,
                                   const std::function<double(double, double)>& g_fn,
                                   double tolerance = 1e-8);
};

/// Conjugate-gradient solve of the masked 5-point system to a relative
/// residual below the problem tolerance (iteration cap 40 sqrt(cells)).
/// Throws on a disconnected mask (unless allowed) or non-convergence.
Field solve_dirichlet(const EllipticProblem& prob);

/// Sum of squared forward differences over stencil cells times cell volume.
double dirichlet_energy(const Field& u);

/// Max over bumps of |a(u, phi) - int f phi| with the discrete bilinear form
/// built from the same forward differences the solver discretizes; for the
/// exact discrete solution this reduces to the CG residual paired with phi.
double weak_residual(const Field& u, const EllipticProblem& prob, const TestDictionary& bumps);

/// A sampled family of channel shapes for the direct-method sweep.
struct ShapeFamily {
    GridSpec grid;
    std::vector<double> params; // c values, increasing
    std::function<std::function<double(double)>(double)> radius_of;
    std::function<double(double)> price; // P(c)
    double drag_weight = 0.0;            // default objective weight
    double tolerance = 1e-8;
};

struct ShapeCandidateRow {
    double c = 0.0;
    double measure = 0.0;
    double drag = 0.0;
    double price = 0.0;
    double objective = 0.0;
    bool failed = false;
    std::string note;
};

struct ShapeSearchResult {
    int best_index = -1; // into table
    double best_c = 0.0;
    Field solution;
    std::vector<ShapeCandidateRow> table;
    double lambda = 0.0;
};

/// Solve every candidate channel with the given end data, score drag plus
/// lambda times price, and return the argmin (ties to the smaller c). Failed
/// solves are flagged and excluded.
ShapeSearchResult shape_search(const ShapeFamily& family,
                               const std::function<double(double)>& end_profile,
                               std::optional<double> lambda = std::nullopt);

/// Canonical end data for the channel experiments: cos^4(pi y) inside the
/// half-unit aperture, zero outside. Concentrated at mid-channel so the
/// energy is insensitive to wall perturbations.
double default_end_profile(double y);

struct LscOptions {
    double tol_fraction = 0.05;   // allowed energy slack relative to the limit
    double tail_fraction = 0.5;
    bool with_poincare = false;   // also track per-member oscillation constants
    double solver_tolerance = 1e-8;
};

struct LscResult {
    double limit_energy = 0.0;
    std::vector<double> member_energy;
    double min_tail_energy = 0.0;
    bool holds = false; // limit energy <= min tail energy + tol
    double tol = 0.0;
    std::vector<double> poincare_constants;
    bool poincare_degraded = false;
    std::string notes;
};

/// Solves the shared problem on every member and on the limit and checks the
/// lower-semicontinuity inequality for the energies.
LscResult lsc_check(const std::vector<DomainMask>& seq, const DomainMask& limit,
                    const std::function<double(double, double)>& f_fn,
                    const std::function<double(double, double)>& g_fn, const LscOptions& opts = {});

} // namespace vardom
