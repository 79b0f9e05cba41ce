#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "utfsr/errors.hpp"
#include "utfsr/io.hpp"
#include "utfsr/oracle.hpp"
#include "utfsr/reconstruct.hpp"

using namespace utfsr;
using fixtures::y;

namespace {

const FrequencyGrid kGrid;

/// Random DAG over a shuffled node order; every link is an FIR filter with
/// lags 0..2. Gains are small enough that the sample statistics settle fast.
Ldim random_fir(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> coeff(-0.8, 0.8);
    const std::size_t n = size(rng);
    std::vector<Node> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Link> links;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            if (unit(rng) > 0.4) continue;
            std::vector<double> c(3);
            for (auto& v : c) v = coeff(rng);
            links.push_back({order[a], order[b], RationalTransfer(LaurentPolynomial(c))});
        }
    std::vector<NoiseChannel> noise;
    for (std::size_t k = 0; k < n; ++k) noise.push_back({0.5 + unit(rng)});
    return Ldim(n, std::move(links), std::move(noise));
}

Ldim permuted(const Ldim& m, const std::vector<Node>& perm) {
    std::vector<Link> links;
    for (const auto& l : m.links()) links.push_back({perm[l.from], perm[l.to], l.transfer});
    std::vector<NoiseChannel> noise(m.size());
    for (Node v = 0; v < m.size(); ++v) noise[perm[v]] = m.noise()[v];
    return Ldim(m.size(), std::move(links), std::move(noise));
}

UndirectedGraph relabel(const UndirectedGraph& g, const std::vector<Node>& perm) {
    UndirectedGraph out(g.size());
    for (const auto& e : g.edges()) out.add_edge(perm[e.a], perm[e.b]);
    return out;
}

const std::vector<std::string> kFixtures{"diamond", "cancelling_diamond", "cancelled_coparents", "feedback_ring", "coparent_square", "collider_pair"};

}  // namespace

TEST_CASE("psd is conjugate symmetric and positive semidefinite") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = oracle::gen_utf(6, 0.4, 0.4, seed);
        const auto s = psd(m, FrequencyGrid(128));
        for (std::size_t k = 1; k < 128; ++k) {
            CHECK((s.at(128 - k) - s.at(k).conjugate()).cwiseAbs().maxCoeff() <= 1e-10 * s.scale());
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s.at(k));
            CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * s.at(k).trace().real());
        }
    }
}

TEST_CASE("skeleton is inside the moral graph") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto g = causal_graph(oracle::gen_utf(7, 0.4, 0.3, seed));
        CHECK(skeleton(g).is_subgraph_of(moral_graph(g)));
    }
}

TEST_CASE("simulated covariances match the spectrum") {
    constexpr std::size_t kSamples = 1'000'000;
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto m = random_fir(1000 + seed);
        const auto exact = covariances_from_psd(psd(m, kGrid), 4);
        const auto samples = simulate(m, kSamples, seed);
        for (long tau = 0; tau <= 4; ++tau) {
            const auto r = oracle::sample_covariance(samples, tau);
            const auto se = oracle::sample_covariance_se(samples, tau);
            const auto want = exact.at(tau);
            for (Eigen::Index a = 0; a < r.rows(); ++a)
                for (Eigen::Index b = 0; b < r.cols(); ++b) {
                    CAPTURE(seed);
                    CAPTURE(tau);
                    CHECK(std::abs(r(a, b) - want(a, b)) <= 4.0 * se(a, b));
                    ++checked;
                }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("causal filters agree with least squares on simulated data") {
    constexpr std::size_t kLags = 24;
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto m = oracle::gen_utf(2 + seed % 4, 0.6, 0.3, 500 + seed);
        const auto n = m.size();
        std::vector<Node> nodes(n);
        std::iota(nodes.begin(), nodes.end(), 0);
        std::shuffle(nodes.begin(), nodes.end(), rng);
        const Node target = nodes[0];
        std::vector<Regressor> regs;
        for (std::size_t k = 1; k < std::min<std::size_t>(n, 3); ++k)
            regs.push_back(k % 2 ? present(nodes[k]) : delayed(nodes[k]));
        regs.push_back(delayed(target));
        const RegressorSpec spec(target, regs, kLags);
        CAPTURE(seed);
        const auto exact = causal_wiener(covariances_from_psd(psd(m, kGrid), kLags), spec);
        const auto est = oracle::ols_wiener(m, spec, 1'000'000, seed);
        for (const auto& [key, c] : exact.coefficients) {
            CAPTURE(key.first);
            CAPTURE(key.second);
            CHECK(std::abs(est.coefficients.at(key) - c) <= std::max(1e-3, 5.0 * est.standard_errors.at(key)));
        }
    }
}

TEST_CASE("reports are deterministic") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = psd(oracle::gen_utf(6, 0.5, 0.3, seed), kGrid);
        const auto a = utf_sr(s);
        const auto b = utf_sr(s);
        CHECK(a.status == b.status);
        CHECK(a.output == b.output);
        CHECK(io::report_to_json(a).dump() == io::report_to_json(b).dump());
        for (const auto& [e, ev] : a.evidence) {
            const auto& other = b.evidence.at(e);
            CHECK(ev.subsets_searched == other.subsets_searched);
            if (ev.md1 && other.md1) CHECK(ev.md1->margin == other.md1->margin);
        }
    }
}

TEST_CASE("search returns minimal witnesses") {
    // Re-runs every smaller candidate of the enumeration order and checks that none passes.
    auto verify = [](const CovarianceSequence& cov, const UndirectedGraph& g, const EdgeRemovalEvidence& ev) {
        const Node j = ev.edge.a;
        const Node i = ev.edge.b;
        std::vector<Node> pool;
        for (Node v = 0; v < g.size(); ++v)
            if (v != i && v != j && (g.has_edge(v, i) || g.has_edge(v, j))) pool.push_back(v);
        auto smaller_passes = [&](const MdWitness& w, auto&& test, bool tested_may_be_present) {
            const auto key = std::tuple(w.cardinality(), w.delayed.size(), w.present, w.delayed);
            auto cands = pool;
            if (tested_may_be_present) cands.push_back(w.tested);
            std::sort(cands.begin(), cands.end());
            std::size_t total = 1;
            for (std::size_t k = 0; k < cands.size(); ++k) total *= 3;
            for (std::size_t code = 0; code < total; ++code) {
                std::vector<Node> pres, del;
                std::size_t rest = code;
                bool ok = true;
                for (Node c : cands) {
                    const auto s = rest % 3;
                    rest /= 3;
                    if (s == 1) pres.push_back(c);
                    if (s == 2) {
                        if (c == w.tested) ok = false;
                        del.push_back(c);
                    }
                }
                if (!ok) continue;
                if (std::tuple(pres.size() + del.size(), del.size(), pres, del) >= key) continue;
                try {
                    if (test(pres, del).separated) return true;
                } catch (const TailTooHeavy&) {
                }
            }
            return false;
        };
        if (ev.md1) {
            CHECK_FALSE(smaller_passes(*ev.md1, [&](const auto& p, const auto& d) {
                return strictly_causal_component(cov, j, i, p, d);
            }, false));
        }
        if (ev.md2) {
            CHECK_FALSE(smaller_passes(*ev.md2, [&](const auto& p, const auto& d) {
                std::vector<Regressor> regs;
                for (Node v : p) regs.push_back(present(v));
                for (Node v : d) regs.push_back(delayed(v));
                return cwsep(cov, j, regs, delayed(i));
            }, true));
        }
        if (ev.md3) {
            CHECK_FALSE(smaller_passes(*ev.md3, [&](const auto& p, const auto& d) {
                std::vector<Regressor> regs;
                for (Node v : p) regs.push_back(present(v));
                for (Node v : d) regs.push_back(delayed(v));
                return cwsep(cov, i, regs, delayed(j));
            }, true));
        }
    };
    for (const auto& name : kFixtures) {
        CAPTURE(name);
        const auto s = psd(fixtures::load(name), kGrid);
        const auto r = utf_sr(s);
        const auto cov = covariances_from_psd(s, kDefaultCausalLags);
        for (const auto& [e, ev] : r.evidence) verify(cov, r.moral_bound, ev);
    }
}

TEST_CASE("fixture verdicts do not depend on eps within the band") {
    for (const auto& name : kFixtures) {
        CAPTURE(name);
        const auto s = psd(fixtures::load(name), kGrid);
        const auto base = utf_sr(s);
        for (const double eps : {1e-7, 1e-5, 1e-4}) {
            CAPTURE(eps);
            ReconstructionOptions opts;
            opts.eps_sep = eps;
            const auto r = utf_sr(s, opts);
            CHECK(r.moral_bound == base.moral_bound);
            CHECK(r.output == base.output);
            CHECK(r.status == base.status);
            for (const auto& [e, ev] : base.evidence) CHECK(r.evidence.at(e).removable() == ev.removable());
        }
    }
}

TEST_CASE("relabeling nodes relabels the results") {
    std::mt19937_64 rng(4);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto m = oracle::gen_utf(5, 0.5, 0.3, 40 + seed);
        std::vector<Node> perm(m.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto pm = permuted(m, perm);
        const auto s = psd(m, kGrid);
        const auto ps = psd(pm, kGrid);

        const auto w = noncausal_wiener(s, 0, {1, 2, 3, 4});
        const auto pw = noncausal_wiener(ps, perm[0], {perm[1], perm[2], perm[3], perm[4]});
        for (Node v = 1; v < 5; ++v) CHECK(pw.component_norms.at(perm[v]) == doctest::Approx(w.component_norms.at(v)));

        const auto cov = covariances_from_psd(s, kDefaultCausalLags);
        const auto pcov = covariances_from_psd(ps, kDefaultCausalLags);
        const auto c = causal_wiener(cov, RegressorSpec(0, {present(1), delayed(2), delayed(0)}, kDefaultCausalLags));
        const auto pc = causal_wiener(
            pcov, RegressorSpec(perm[0], {present(perm[1]), delayed(perm[2]), delayed(perm[0])}, kDefaultCausalLags));
        for (const auto& [key, value] : c.coefficients)
            CHECK(pc.coefficients.at({perm[key.first], key.second}) == doctest::Approx(value).epsilon(1e-8));

        const auto r = utf_sr(s);
        const auto pr = utf_sr(ps);
        CHECK(relabel(r.moral_bound, perm) == pr.moral_bound);
        CHECK(relabel(r.output, perm) == pr.output);
        CHECK(r.status == pr.status);
    }
}

TEST_CASE("skeleton edges are never wiener separated") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto m = oracle::gen_utf(6, 0.4, 0.3, 700 + seed);
        CHECK(skeleton(causal_graph(m)).is_subgraph_of(moral_bound(psd(m, kGrid))));
    }
}

TEST_CASE("neighborhood search agrees with exhaustive search on small models") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = oracle::gen_utf(5, 0.5, 0.3, 300 + seed);
        const auto s = psd(m, kGrid);
        const auto r = utf_sr(s);
        const auto cov = covariances_from_psd(s, kDefaultCausalLags);
        for (const auto& [e, ev] : r.evidence) CHECK(oracle::brute_force_md(cov, e).removable() == ev.removable());
    }
}
