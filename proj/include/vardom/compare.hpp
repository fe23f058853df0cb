#pragma once

#include "vardom/field.hpp"
#include "vardom/gallery.hpp"
#include "vardom/ze.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vardom {

/// Vertical affine fiber maps between graph domains over a fixed reference:
/// Phi_i(x, y) = (x, a_i(x) + b_i(x) y), sampled per grid column. Index 0
/// holds the map onto the limit domain.
class AleChart {
public:
    /// Fit the fiber maps carrying the reference graphs onto each member's
    /// (and the limit's) graphs. Throws if some fiber degenerates (b <= 0).
    static AleChart from_graphs(const GridSpec& grid, const GraphDomainSpec& reference,
                                const std::vector<GraphDomainSpec>& members,
                                const GraphDomainSpec& limit);

    const GridSpec& grid() const { return grid_; }
    const DomainMask& reference_mask() const { return ref_mask_; }
    int members() const { return static_cast<int>(a_.size()) - 1; }

    /// Column coefficients for member i (i = 0 is the limit map).
    const std::vector<double>& offset(int i) const { return a_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& scale(int i) const { return b_[static_cast<std::size_t>(i)]; }

private:
    GridSpec grid_{};
    DomainMask ref_mask_;
    std::vector<std::vector<double>> a_, b_; // [index][column]
};

/// W^{1,p}(reference) distance between the pullbacks u_i o Phi_i and
/// u o Phi; gradients are pulled back through the affine fiber chain rule.
/// chart_index selects Phi_i; the limit field is pulled through index 0.
double ale_distance(const Field& u_i, const Field& u_limit, const AleChart& chart, int chart_index,
                    double p);

/// Nearest-inside-cell value extension within the collar, zero beyond.
ExtendedField extension_operator(const Field& u, double collar);

struct ConnectingSystem {
    enum class Kind { RestrictExtension, PlainRestriction };
    Kind kind = Kind::RestrictExtension;
    double collar = 0.1;
};

/// Apply the connecting operator to the limit field on a member domain.
Field connect(const Field& u_limit, const DomainMask& member, const ConnectingSystem& sys);

/// ||u_i - E_i u||_{W^{1,p}(Omega_i)}. PlainRestriction requires the member
/// to be contained in the limit domain.
double e_distance(const Field& u_i, const Field& u_limit, const ConnectingSystem& sys, double p);

enum class NotionVerdict { Strong, Fails, NotApplicable };
std::string notion_verdict_name(NotionVerdict v);

struct EquivalenceReport {
    NotionVerdict ze = NotionVerdict::NotApplicable;
    NotionVerdict ale = NotionVerdict::NotApplicable;
    NotionVerdict e = NotionVerdict::NotApplicable;
    std::vector<double> ze_distances;
    std::vector<double> ale_distances;
    std::vector<double> e_distances;
    double tol = 0.0;
    // pairwise agreement: +1 agree, 0 disagree, -1 not comparable
    int agree_ze_ale = -1;
    int agree_ze_e = -1;
    int agree_ale_e = -1;
    std::string notes;
};

/// Run all applicable notions on the sequence with one tolerance and record
/// the verdict agreement. A missing chart (topology change, non-graph
/// members) yields a first-class "not-applicable" for the ALE column.
EquivalenceReport equivalence_report(const SequencePair& seq, const std::optional<AleChart>& chart,
                                     const ConnectingSystem& sys,
                                     std::optional<double> tol = std::nullopt);

using ConnectingOperator = std::function<Field(const Field& limit, const DomainMask& member)>;

struct EquiintegrabilityTable {
    std::vector<double> deltas;            // probe-collar measures, decreasing
    std::vector<std::vector<double>> mass; // [delta][member]: int_V |E_i u|^p
    std::vector<double> max_mass;          // per delta, max over members
    bool equiintegrable = false;
};

/// Tabulates the p-mass the connecting operator leaves in boundary collars of
/// measure about delta, for every member; the verdict requires the max mass
/// to decay with delta uniformly in the member index.
EquiintegrabilityTable equiintegrability_probe(const ConnectingOperator& op, const Field& u_limit,
                                               const std::vector<DomainMask>& members,
                                               const std::vector<double>& deltas, double p);
EquiintegrabilityTable equiintegrability_probe(const ConnectingSystem& sys, const Field& u_limit,
                                               const std::vector<DomainMask>& members,
                                               const std::vector<double>& deltas, double p);

} // namespace vardom
