#include "utfsr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "utfsr/errors.hpp"

namespace utfsr::oracle {

namespace {

constexpr std::size_t kMaxRounds = 1000;
constexpr double kMinGain = 0.3;
constexpr double kMaxGain = 2.0;
// Bound on the spectral radius of the one-step delay recursion.
constexpr double kMaxLoopRadius = 0.95;

std::vector<std::pair<Node, long>> design_columns(const RegressorSpec& spec) {
    std::vector<std::pair<Node, long>> cols;
    for (const auto& e : spec.entries())
        for (std::size_t lag = e.first_lag(); lag <= spec.max_lag(); ++lag) cols.emplace_back(e.node, static_cast<long>(lag));
    return cols;
}

}  // namespace

OlsEstimate ols_fit(const Eigen::MatrixXd& samples, const RegressorSpec& spec, std::size_t burn_in) {
    const auto cols = design_columns(spec);
    const auto p = static_cast<Eigen::Index>(cols.size());
    const auto total = samples.cols();
    const auto first = static_cast<Eigen::Index>(std::max<std::size_t>(burn_in, spec.max_lag()));
    if (first + p + 1 >= total) throw std::invalid_argument("too few samples for the requested regression");
    const auto target = static_cast<Eigen::Index>(spec.target());

    // Accumulate X^T X and X^T y in blocks to bound memory.
    constexpr Eigen::Index kBlock = 4096;
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(p);
    double yty = 0.0;
    Eigen::MatrixXd x(kBlock, p);
    Eigen::VectorXd y(kBlock);
    for (Eigen::Index start = first; start < total; start += kBlock) {
        const Eigen::Index rows = std::min(kBlock, total - start);
        for (Eigen::Index r = 0; r < rows; ++r) {
            const Eigen::Index t = start + r;
            y(r) = samples(target, t);
            for (Eigen::Index c = 0; c < p; ++c) {
                const auto [node, lag] = cols[static_cast<std::size_t>(c)];
                x(r, c) = samples(static_cast<Eigen::Index>(node), t - lag);
            }
        }
        const auto xb = x.topRows(rows);
        const auto yb = y.head(rows);
        xtx.selfadjointView<Eigen::Lower>().rankUpdate(xb.transpose());
        xty.noalias() += xb.transpose() * yb;
        yty += yb.squaredNorm();
    }
    xtx = xtx.selfadjointView<Eigen::Lower>();

    const auto used = static_cast<double>(total - first);
    OlsEstimate out;
    out.sample_count = static_cast<std::size_t>(total - first);
    if (p == 0) return out;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    const Eigen::VectorXd beta = ldlt.solve(xty);
    const double rss = std::max(0.0, yty - beta.dot(xty));
    const double sigma2 = rss / (used - static_cast<double>(p));
    const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(p, p));
    for (Eigen::Index c = 0; c < p; ++c) {
        out.coefficients[cols[static_cast<std::size_t>(c)]] = beta(c);
        out.standard_errors[cols[static_cast<std::size_t>(c)]] = std::sqrt(std::max(sigma2 * inv(c, c), 1e-300));
    }
    return out;
}

OlsEstimate ols_wiener(const Ldim& m, const RegressorSpec& spec, std::size_t samples, std::uint64_t seed) {
    const Eigen::MatrixXd y = simulate(m, samples, seed);
    return ols_fit(y, spec, 10 * spec.max_lag());
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples, long tau) {
    const auto lag = static_cast<Eigen::Index>(std::abs(tau));
    const Eigen::Index count = samples.cols() - lag;
    if (count <= 1) throw std::invalid_argument("lag too large for sample count");
    const auto lead = samples.rightCols(count);
    const auto lagged = samples.leftCols(count);
    Eigen::MatrixXd r = lead * lagged.transpose() / static_cast<double>(count);
    return tau >= 0 ? r : Eigen::MatrixXd(r.transpose());
}

Eigen::MatrixXd sample_covariance_se(const Eigen::MatrixXd& samples, long tau) {
    // Batch means over 100 contiguous blocks absorb serial correlation of the products.
    constexpr Eigen::Index kBatches = 100;
    const auto lag = static_cast<Eigen::Index>(std::abs(tau));
    const Eigen::Index count = samples.cols() - lag;
    const Eigen::Index per = count / kBatches;
    if (per < 2) throw std::invalid_argument("too few samples for batch standard errors");
    const auto n = samples.rows();
    std::vector<Eigen::MatrixXd> means;
    for (Eigen::Index b = 0; b < kBatches; ++b) {
        const auto lead = samples.middleCols(lag + b * per, per);
        const auto lagged = samples.middleCols(b * per, per);
        means.emplace_back(lead * lagged.transpose() / static_cast<double>(per));
    }
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    for (const auto& m : means) mean += m;
    mean /= static_cast<double>(kBatches);
    Eigen::MatrixXd var = Eigen::MatrixXd::Zero(n, n);
    for (const auto& m : means) var += (m - mean).cwiseAbs2();
    var /= static_cast<double>(kBatches - 1);
    Eigen::MatrixXd se = (var / static_cast<double>(kBatches)).cwiseSqrt();
    return tau >= 0 ? se : Eigen::MatrixXd(se.transpose());
}

double delay_loop_radius(const Ldim& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n, n);
    for (const auto& l : m.links()) {
        const auto& t = l.transfer;
        if (t.den().degree() != 0 || t.num().degree() > 1) {
            throw std::invalid_argument("delay_loop_radius needs transfers of the form a + b z^-1");
        }
        h0(static_cast<Eigen::Index>(l.to), static_cast<Eigen::Index>(l.from)) = t.num().coeff(0);
        h1(static_cast<Eigen::Index>(l.to), static_cast<Eigen::Index>(l.from)) = t.num().coeff(1);
    }
    const Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(n, n) - h0).lu().solve(h1);
    return a.eigenvalues().cwiseAbs().maxCoeff();
}

Ldim gen_utf(std::size_t n, double edge_density, double delay_prob, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("need at least one node");
    if (!(edge_density > 0.0 && edge_density <= 1.0)) throw std::invalid_argument("edge density must lie in (0, 1]");
    if (!(delay_prob >= 0.0 && delay_prob <= 1.0)) throw std::invalid_argument("delay probability must lie in [0, 1]");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> magnitude(kMinGain, kMaxGain);

    std::vector<UndirectedEdge> pairs;
    for (Node a = 0; a < n; ++a)
        for (Node b = a + 1; b < n; ++b) pairs.emplace_back(a, b);

    for (std::size_t round = 0; round < kMaxRounds; ++round) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        UndirectedGraph skel(n);
        std::vector<Link> links;
        for (const auto& e : pairs) {
            if (unit(rng) >= edge_density) continue;
            bool closes_triangle = false;
            for (Node c : skel.neighbors(e.a)) closes_triangle = closes_triangle || skel.has_edge(c, e.b);
            if (closes_triangle) continue;
            skel.add_edge(e.a, e.b);
            const bool forward = unit(rng) < 0.5;
            const double gain = (unit(rng) < 0.5 ? -1.0 : 1.0) * magnitude(rng);
            const bool delayed_edge = unit(rng) < delay_prob;
            links.push_back(Link{forward ? e.a : e.b, forward ? e.b : e.a,
                                 delayed_edge ? RationalTransfer::delayed_gain(gain, 1) : RationalTransfer::gain(gain)});
        }
        try {
            Ldim model(n, std::move(links));
            if (delay_loop_radius(model) < kMaxLoopRadius) return model;
        } catch (const AlgebraicLoop&) {
        }
    }
    throw GenerationFailed("no admissible model after " + std::to_string(kMaxRounds) + " draws");
}

EdgeRemovalEvidence brute_force_md(const Ldim& m, UndirectedEdge edge, const ReconstructionOptions& options,
                                   const FrequencyGrid& grid) {
    const SpectralDensity s = psd(m, grid);
    return brute_force_md(covariances_from_psd(s, options.max_lag), edge, options);
}

EdgeRemovalEvidence brute_force_md(const CovarianceSequence& cov, UndirectedEdge edge,
                                   const ReconstructionOptions& options) {
    const auto n = static_cast<std::size_t>(cov.dim());
    if (n > 8) throw std::invalid_argument("brute-force MD is limited to 8 nodes");
    const Node j = edge.a;
    const Node i = edge.b;
    std::vector<Node> others;
    for (Node k = 0; k < n; ++k)
        if (k != i && k != j) others.push_back(k);

    EdgeRemovalEvidence ev;
    ev.edge = edge;

    // Every assignment of the candidates to {absent, present, delayed}; keep
    // the passing one that is smallest under the shared ordering.
    enum State { Absent, Present, Delayed };
    struct Candidate {
        Node node;
        bool may_be_present;
        bool may_be_delayed;
    };
    auto exhaust = [&](Node target, const std::vector<Candidate>& cands, auto&& test) -> std::optional<MdWitness> {
        std::optional<MdWitness> best;
        auto key = [](const MdWitness& w) {
            return std::tuple(w.cardinality(), w.delayed.size(), w.present, w.delayed);
        };
        std::size_t combos = 1;
        for (std::size_t k = 0; k < cands.size(); ++k) combos *= 3;
        for (std::size_t code = 0; code < combos; ++code) {
            std::vector<Node> pres;
            std::vector<Node> del;
            bool valid = true;
            std::size_t rest = code;
            for (const auto& c : cands) {
                const auto state = static_cast<State>(rest % 3);
                rest /= 3;
                if (state == Present) {
                    valid = valid && c.may_be_present;
                    pres.push_back(c.node);
                } else if (state == Delayed) {
                    valid = valid && c.may_be_delayed;
                    del.push_back(c.node);
                }
            }
            if (!valid) continue;
            std::sort(pres.begin(), pres.end());
            std::sort(del.begin(), del.end());
            ++ev.subsets_searched;
            SeparationVerdict v;
            try {
                v = test(pres, del);
            } catch (const TailTooHeavy&) {
                ++ev.inconclusive;
                continue;
            }
            if (!v.separated) continue;
            MdWitness w{target, 0, pres, del, v.margin, v.low_confidence};
            if (!best || key(w) < key(*best)) best = w;
        }
        return best;
    };

    const bool self = options.target_self_lags;
    const std::size_t lags = options.max_lag;
    const double eps = options.eps_sep;

    // MD1: S+ among the others (present), S- among the others or the target (delayed).
    std::vector<Candidate> md1;
    for (Node k : others) md1.push_back({k, true, true});
    if (self) md1.push_back({j, false, true});
    ev.md1 = exhaust(j, md1, [&](const std::vector<Node>& p, const std::vector<Node>& d) {
        return strictly_causal_component(cov, j, i, p, d, lags, eps);
    });

    // MD2: S_c excludes y_j, S_s excludes (1/z) y_i.
    auto cwsep_set = [&](Node target, Node tested_node) {
        std::vector<Candidate> c;
        for (Node k : others) c.push_back({k, true, true});
        c.push_back({tested_node, true, false});
        if (self) c.push_back({target, false, true});
        return exhaust(target, c, [&](const std::vector<Node>& p, const std::vector<Node>& d) {
            std::vector<Regressor> cond;
            for (Node v : p) cond.push_back(present(v));
            for (Node v : d) cond.push_back(delayed(v));
            return cwsep(cov, target, cond, delayed(tested_node), lags, eps);
        });
    };
    ev.md2 = cwsep_set(j, i);
    ev.md3 = cwsep_set(i, j);
    if (ev.md1) ev.md1->tested = i;
    if (ev.md2) ev.md2->tested = i;
    if (ev.md3) ev.md3->tested = j;
    return ev;
}

}  // namespace utfsr::oracle
