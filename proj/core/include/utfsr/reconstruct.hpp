#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "utfsr/graph.hpp"
#include "utfsr/lti.hpp"
#include "utfsr/model.hpp"
#include "utfsr/spectral.hpp"
#include "utfsr/wiener.hpp"

namespace utfsr {

struct ReconstructionOptions {
    /// Taps of the finite-lag causal filters.
    std::size_t max_lag = kDefaultCausalLags;
    /// Two-sided lag window of the non-causal filters; 0 means N/4.
    std::size_t noncausal_window = 0;
    double eps_sep = kDefaultEpsSep;
    /// Largest neighborhood pool N(i) u N(j) \ {i, j} the subset search accepts.
    std::size_t search_cap = 12;
    /// Let the target's own delayed past enter the conditioning sets.
    bool target_self_lags = false;
    /// Worker threads for edge tests; 0 picks the hardware concurrency.
    std::size_t threads = 0;
};

/// Separating set found for one MD+ condition.
struct MdWitness {
    Node target = 0;
    /// Tested node: its lag-0 term for MD1+, its delayed past for MD2+/MD3+.
    Node tested = 0;
    std::vector<Node> present;
    std::vector<Node> delayed;
    double margin = 0.0;
    bool low_confidence = false;

    std::size_t cardinality() const { return present.size() + delayed.size(); }
};

struct EdgeRemovalEvidence {
    UndirectedEdge edge;
    std::optional<MdWitness> md1;
    std::optional<MdWitness> md2;
    std::optional<MdWitness> md3;
    std::size_t subsets_searched = 0;
    /// Candidates skipped because their filter did not fit in max_lag taps.
    std::size_t inconclusive = 0;

    bool removable() const { return md1 && md2 && md3; }
};

struct TriangleDiagnostic {
    Triangle nodes{};
    std::vector<UndirectedEdge> removable_edges;
};

enum class CertificateStatus { CertifiedExact, FlaggedLowerBound, AssumptionViolation };

std::string_view to_string(CertificateStatus status);
/// CLI exit code: 0 certified, 3 flagged, 4 assumption violation.
int exit_code(CertificateStatus status);

struct ReconstructionReport {
    std::size_t node_count = 0;
    std::size_t grid_size = 0;
    ReconstructionOptions options;
    UndirectedGraph moral_bound;
    UndirectedGraph output;
    CertificateStatus status = CertificateStatus::CertifiedExact;
    std::vector<TriangleDiagnostic> triangles;
    /// One entry per tested triangle edge.
    std::map<UndirectedEdge, EdgeRemovalEvidence> evidence;
};

/// Edge {i, j} iff not wsep(y_j, y \ {y_i, y_j}, y_i), tested with target max(i, j)
/// and cross-checked with the roles swapped.
/// @throws NumericalInconsistency when the two roles disagree.
UndirectedGraph moral_bound(const SpectralDensity& density, const ReconstructionOptions& options = {});

/// Neighborhood-restricted MD1+/MD2+/MD3+ search for one edge of g.
/// Conditioning pairs (present set, delayed set) are tried by increasing total
/// size, then fewer delayed nodes, then lexicographically; the first passing
/// pair is the witness.
/// @throws SearchBudgetExceeded if the pool exceeds options.search_cap.
EdgeRemovalEvidence md_edge_removable(const CovarianceSequence& cov, const UndirectedGraph& g, UndirectedEdge edge,
                                      const ReconstructionOptions& options = {});

/// Moral bound, triangle edge tests and certificate.
ReconstructionReport utf_sr(const SpectralDensity& density, const ReconstructionOptions& options = {});

struct SkeletonComparison {
    std::vector<UndirectedEdge> false_positives;
    std::vector<UndirectedEdge> false_negatives;

    bool exact() const { return false_positives.empty() && false_negatives.empty(); }
};

/// Compares the report's output to skeleton(causal_graph(truth)).
SkeletonComparison certify_against_truth(const ReconstructionReport& report, const Ldim& truth);

}  // namespace utfsr
