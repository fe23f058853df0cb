#pragma once

#include "vardom/field.hpp"
#include "vardom/gallery.hpp"

#include <optional>
#include <vector>

namespace vardom {

/// Sampled parametrization of one graph boundary piece: points (x_k, g(x_k))
/// over a uniform parameter grid, with the inward direction recorded so trace
/// sampling can step one cell into the domain.
struct TraceChart {
    std::vector<double> param;                  // x_k
    std::vector<double> height;                 // g(x_k)
    double param_step = 0.0;                    // uniform spacing of x_k
    double inward = -1.0;                       // +-1: sign of the inward y-direction

    /// Chart over the upper (top = true) or lower boundary graph.
    static TraceChart from_graph(const GraphDomainSpec& graphs, int n_samples, bool top = true);
};

/// Boundary samples of f along the chart: bilinear interpolation of inside
/// cell values at the chart point nudged one cell inward. Throws if some
/// chart point has no inside cell to interpolate from.
std::vector<double> trace(const Field& f, const TraceChart& chart);

/// L^p norm on the parameter interval of a sampled trace.
double trace_lp_norm(const std::vector<double>& values, const TraceChart& chart, double p);

struct TraceConvergenceResult {
    std::vector<double> distances; // per index, L^p(omega) distance to the limit trace
    double tol = 0.0;
    bool converged = false;  // tail below tol
    bool partial = false;    // some chart columns were refused
    int valid_columns = 0;
    int total_columns = 0;
};

/// Distances between member traces and the limit trace on the shared
/// parameter grid. Columns refused by any chart (no inside neighbors) are
/// excluded everywhere and reported via the partial flag.
TraceConvergenceResult trace_convergence(const std::vector<Field>& fields,
                                         const std::vector<TraceChart>& charts,
                                         const Field& limit_field, const TraceChart& limit_chart,
                                         double p, double tol);

/// ||trace(f)||_{L^p(omega)} / ||f||_{W^{1,p}}. Throws on the zero field.
double trace_norm_bound(const Field& f, const TraceChart& chart, double p);

/// Multiply by the distance-based cutoff: 0 where dist(x, complement) is
/// below about epsilon, 1 past about 2 epsilon, smoothstep between, with the
/// zero band widened by two cells so the support stays strictly inside
/// shrink(domain, epsilon). Requires epsilon > 4h.
Field inner_cutoff(const Field& u, double epsilon);

/// Move a (near) zero-trace field onto a target domain: cut off inside, then
/// restrict. Requires shrink(domain, epsilon) to be contained in the target;
/// the result carries exactly zero mass within one cell of the target
/// boundary.
Field transfer_zero_boundary(const Field& u, const DomainMask& target, double epsilon);

} // namespace vardom
