#include "utfsr/reconstruct.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "utfsr/errors.hpp"

namespace utfsr {

namespace {

std::string edge_name(const UndirectedEdge& e) {
    return "{" + std::to_string(e.a + 1) + "," + std::to_string(e.b + 1) + "}";
}

// Calls visit on every k-subset of pool (sorted) in lexicographic order until
// visit returns true.
bool for_each_combination(const std::vector<Node>& pool, std::size_t k,
                          const std::function<bool(const std::vector<Node>&)>& visit) {
    if (k > pool.size()) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<Node> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (visit(subset)) return true;
        // Advance to the next combination.
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == pool.size() - k + pos - 1) --pos;
        if (pos == 0) return false;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

std::vector<Node> without(const std::vector<Node>& pool, const std::vector<Node>& drop) {
    std::vector<Node> out;
    std::set_difference(pool.begin(), pool.end(), drop.begin(), drop.end(), std::back_inserter(out));
    return out;
}

std::vector<Node> sorted_union(std::vector<Node> a, const std::vector<Node>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

using Predicate = std::function<SeparationVerdict(const std::vector<Node>&, const std::vector<Node>&)>;

struct SearchCounters {
    std::size_t searched = 0;
    std::size_t inconclusive = 0;
};

// First passing (present, delayed) pair by (total size, delayed size, present lex, delayed lex).
std::optional<MdWitness> search_condition(Node target, Node tested, const std::vector<Node>& present_pool,
                                          const std::vector<Node>& delayed_pool, const Predicate& test,
                                          SearchCounters& counters) {
    const std::size_t max_total = sorted_union(present_pool, delayed_pool).size();
    std::optional<MdWitness> found;
    for (std::size_t total = 0; total <= max_total && !found; ++total) {
        for (std::size_t d = 0; d <= total && !found; ++d) {
            const std::size_t p = total - d;
            for_each_combination(present_pool, p, [&](const std::vector<Node>& pres) {
                const std::vector<Node> remaining = without(delayed_pool, pres);
                return for_each_combination(remaining, d, [&](const std::vector<Node>& del) {
                    ++counters.searched;
                    SeparationVerdict v;
                    try {
                        v = test(pres, del);
                    } catch (const TailTooHeavy&) {
                        ++counters.inconclusive;
                        return false;
                    }
                    if (!v.separated) return false;
                    found = MdWitness{target, tested, pres, del, v.margin, v.low_confidence};
                    return true;
                });
            });
        }
    }
    return found;
}

std::vector<Regressor> as_regressors(const std::vector<Node>& pres, const std::vector<Node>& del) {
    std::vector<Regressor> out;
    for (Node v : pres) out.push_back(present(v));
    for (Node v : del) out.push_back(delayed(v));
    return out;
}

}  // namespace

std::string_view to_string(CertificateStatus status) {
    switch (status) {
        case CertificateStatus::CertifiedExact: return "CertifiedExact";
        case CertificateStatus::FlaggedLowerBound: return "FlaggedLowerBound";
        case CertificateStatus::AssumptionViolation: return "AssumptionViolation";
    }
    return "unknown";
}

int exit_code(CertificateStatus status) {
    switch (status) {
        case CertificateStatus::CertifiedExact: return 0;
        case CertificateStatus::FlaggedLowerBound: return 3;
        case CertificateStatus::AssumptionViolation: return 4;
    }
    return 1;
}

UndirectedGraph moral_bound(const SpectralDensity& density, const ReconstructionOptions& options) {
    const auto n = static_cast<std::size_t>(density.dim());
    UndirectedGraph out(n);
    for (Node a = 0; a < n; ++a) {
        for (Node b = a + 1; b < n; ++b) {
            std::vector<Node> rest;
            for (Node k = 0; k < n; ++k)
                if (k != a && k != b) rest.push_back(k);
            const auto forward = wsep(density, b, rest, a, options.eps_sep, options.noncausal_window);
            const auto backward = wsep(density, a, rest, b, options.eps_sep, options.noncausal_window);
            if (forward.separated != backward.separated) {
                throw NumericalInconsistency("wsep verdicts for " + edge_name({a, b}) +
                                             " disagree when roles are swapped (margins " +
                                             std::to_string(forward.margin) + " vs " +
                                             std::to_string(backward.margin) + ")");
            }
            if (!forward.separated) out.add_edge(a, b);
        }
    }
    return out;
}

EdgeRemovalEvidence md_edge_removable(const CovarianceSequence& cov, const UndirectedGraph& g, UndirectedEdge edge,
                                      const ReconstructionOptions& options) {
    if (!g.has_edge(edge.a, edge.b)) throw std::invalid_argument("edge " + edge_name(edge) + " is not in the graph");
    // MD1+/MD2+ estimate y_j and test y_i; MD3+ swaps the roles.
    const Node j = edge.a;
    const Node i = edge.b;
    const std::vector<Node> pool = without(sorted_union(g.neighbors(i), g.neighbors(j)), {j, i});
    if (pool.size() > options.search_cap) {
        throw SearchBudgetExceeded("neighborhood pool of " + edge_name(edge) + " has " + std::to_string(pool.size()) +
                                   " nodes, cap is " + std::to_string(options.search_cap));
    }
    const std::size_t m = options.max_lag;
    const double eps = options.eps_sep;
    auto self = [&](Node target) {
        return options.target_self_lags ? sorted_union(pool, {target}) : pool;
    };

    EdgeRemovalEvidence ev;
    ev.edge = edge;
    SearchCounters counters;

    ev.md1 = search_condition(
        j, i, pool, self(j),
        [&](const std::vector<Node>& pres, const std::vector<Node>& del) {
            return strictly_causal_component(cov, j, i, pres, del, m, eps);
        },
        counters);
    if (ev.md1) {
        ev.md2 = search_condition(
            j, i, sorted_union(pool, {i}), self(j),
            [&](const std::vector<Node>& pres, const std::vector<Node>& del) {
                return cwsep(cov, j, as_regressors(pres, del), delayed(i), m, eps);
            },
            counters);
    }
    if (ev.md1 && ev.md2) {
        ev.md3 = search_condition(
            i, j, sorted_union(pool, {j}), self(i),
            [&](const std::vector<Node>& pres, const std::vector<Node>& del) {
                return cwsep(cov, i, as_regressors(pres, del), delayed(j), m, eps);
            },
            counters);
    }
    ev.subsets_searched = counters.searched;
    ev.inconclusive = counters.inconclusive;
    return ev;
}

ReconstructionReport utf_sr(const SpectralDensity& density, const ReconstructionOptions& options) {
    ReconstructionReport report;
    report.node_count = static_cast<std::size_t>(density.dim());
    report.grid_size = density.grid().size();
    report.options = options;
    report.moral_bound = moral_bound(density, options);
    report.output = report.moral_bound;

    const auto triangles = enumerate_triangles(report.moral_bound);
    std::set<UndirectedEdge> tested;
    for (const auto& t : triangles) {
        tested.insert({t[0], t[1]});
        tested.insert({t[0], t[2]});
        tested.insert({t[1], t[2]});
    }

    if (!tested.empty()) {
        const CovarianceSequence cov = covariances_from_psd(density, options.max_lag);
        std::size_t workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
        const std::vector<UndirectedEdge> edges(tested.begin(), tested.end());
        for (std::size_t start = 0; start < edges.size(); start += workers) {
            const std::size_t stop = std::min(edges.size(), start + workers);
            std::vector<std::future<EdgeRemovalEvidence>> jobs;
            for (std::size_t k = start; k < stop; ++k) {
                jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                          [&, e = edges[k]] { return md_edge_removable(cov, report.moral_bound, e, options); }));
            }
            for (std::size_t k = start; k < stop; ++k) report.evidence.emplace(edges[k], jobs[k - start].get());
        }
    }

    bool flagged = false;
    bool violated = false;
    for (const auto& t : triangles) {
        TriangleDiagnostic diag;
        diag.nodes = t;
        for (const UndirectedEdge e : {UndirectedEdge(t[0], t[1]), UndirectedEdge(t[0], t[2]), UndirectedEdge(t[1], t[2])}) {
            if (report.evidence.at(e).removable()) diag.removable_edges.push_back(e);
        }
        if (diag.removable_edges.empty()) violated = true;
        if (diag.removable_edges.size() >= 2) flagged = true;
        report.triangles.push_back(std::move(diag));
    }
    for (const auto& [e, ev] : report.evidence)
        if (ev.removable()) report.output.remove_edge(e);

    report.status = violated  ? CertificateStatus::AssumptionViolation
                    : flagged ? CertificateStatus::FlaggedLowerBound
                              : CertificateStatus::CertifiedExact;
    return report;
}

SkeletonComparison certify_against_truth(const ReconstructionReport& report, const Ldim& truth) {
    if (truth.size() != report.output.size()) throw std::invalid_argument("model and report sizes differ");
    const UndirectedGraph skel = skeleton(causal_graph(truth));
    return SkeletonComparison{edge_difference(report.output, skel), edge_difference(skel, report.output)};
}

}  // namespace utfsr
