#include "utfsr/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "utfsr/errors.hpp"

namespace utfsr {

namespace {

const RationalTransfer kZeroTransfer{};

// Kahn's algorithm over the feedthrough graph, lowest index first.
std::vector<Node> feedthrough_topological_order(std::size_t n, const std::vector<Link>& links) {
    std::vector<std::vector<Node>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& l : links) {
        if (l.transfer.feedthrough() != 0.0) {
            out[l.from].push_back(l.to);
            ++indegree[l.to];
        }
    }
    std::set<Node> ready;
    for (Node v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.insert(v);
    std::vector<Node> order;
    while (!ready.empty()) {
        const Node v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (Node w : out[v])
            if (--indegree[w] == 0) ready.insert(w);
    }
    if (order.size() != n) {
        throw AlgebraicLoop("direct feedthroughs form a cycle (algebraic loop)");
    }
    return order;
}

// Direct-form IIR section; the input is read from a row of a sample matrix
// so that lag-0 input is only touched when the numerator has a feedthrough.
class Section {
public:
    explicit Section(const RationalTransfer& t)
        : b_(t.num().coeffs()), a_(t.den().coeffs()), past_(a_.size(), 0.0) {}

    double step(const Eigen::MatrixXd& input, Eigen::Index row, Eigen::Index t) {
        double u = 0.0;
        for (std::size_t k = 0; k < b_.size() && static_cast<Eigen::Index>(k) <= t; ++k) {
            if (b_[k] != 0.0) u += b_[k] * input(row, t - static_cast<Eigen::Index>(k));
        }
        // past_[k] holds u(t-k) for k >= 1, ring-indexed by t.
        const std::size_t p = a_.size();
        for (std::size_t k = 1; k < p; ++k) u -= a_[k] * past_[(static_cast<std::size_t>(t) + p - k) % p];
        if (p > 0) past_[static_cast<std::size_t>(t) % p] = u;
        return u;
    }

private:
    std::vector<double> b_;
    std::vector<double> a_;
    std::vector<double> past_;
};

}  // namespace

Ldim::Ldim(std::size_t n, std::vector<Link> links, std::vector<NoiseChannel> noise)
    : n_(n), noise_(std::move(noise)) {
    if (n_ == 0) throw std::invalid_argument("model needs at least one node");
    for (auto& l : links) {
        if (l.from >= n_ || l.to >= n_) throw std::out_of_range("link endpoint outside model");
        if (l.from == l.to) throw std::invalid_argument("H must have a zero diagonal");
        if (!l.transfer.is_zero()) links_.push_back(std::move(l));
    }
    std::sort(links_.begin(), links_.end(), [](const Link& x, const Link& y) {
        return std::pair(x.to, x.from) < std::pair(y.to, y.from);
    });
    for (std::size_t k = 1; k < links_.size(); ++k) {
        if (links_[k].to == links_[k - 1].to && links_[k].from == links_[k - 1].from) {
            throw std::invalid_argument("duplicate link " + std::to_string(links_[k].from + 1) + "->" +
                                        std::to_string(links_[k].to + 1));
        }
    }
    if (noise_.empty()) noise_.assign(n_, NoiseChannel{});
    if (noise_.size() != n_) throw std::invalid_argument("need one noise channel per node");
    for (const auto& ch : noise_) {
        if (!(ch.variance > 0.0) || !std::isfinite(ch.variance)) {
            throw std::invalid_argument("noise variance must be positive");
        }
        if (ch.coloring.is_zero()) throw std::invalid_argument("noise coloring must be nonzero");
    }
    order_ = feedthrough_topological_order(n_, links_);
}

const RationalTransfer& Ldim::transfer(Node to, Node from) const {
    auto it = std::lower_bound(links_.begin(), links_.end(), std::pair(to, from),
                               [](const Link& l, const std::pair<Node, Node>& key) {
                                   return std::pair(l.to, l.from) < key;
                               });
    if (it != links_.end() && it->to == to && it->from == from) return it->transfer;
    return kZeroTransfer;
}

std::size_t Ldim::max_lag() const {
    std::size_t lag = 0;
    for (const auto& l : links_) lag = std::max(lag, l.transfer.max_lag());
    for (const auto& ch : noise_) lag = std::max(lag, ch.coloring.max_lag());
    return lag;
}

DirectedGraph causal_graph(const Ldim& m) {
    DirectedGraph g(m.size());
    for (const auto& l : m.links()) g.add_edge(l.from, l.to);
    return g;
}

UtfReport validate_utf(const Ldim& m) {
    const DirectedGraph g = causal_graph(m);
    return UtfReport{two_cycles(g), enumerate_triangles(skeleton(g))};
}

SpectralDensity psd(const Ldim& m, const FrequencyGrid& grid) {
    if (!grid.resolves(m.max_lag())) {
        throw ResolutionTooCoarse("grid of " + std::to_string(grid.size()) +
                                  " points cannot resolve model lag " + std::to_string(m.max_lag()));
    }
    const auto n = static_cast<Eigen::Index>(m.size());
    const std::size_t count = grid.size();

    std::vector<Eigen::MatrixXcd> system(count, Eigen::MatrixXcd::Identity(n, n));
    for (const auto& l : m.links()) {
        const auto h = eval_on_grid(l.transfer, grid);
        for (std::size_t k = 0; k < count; ++k) system[k](l.to, l.from) -= h[k];
    }
    Eigen::MatrixXd noise(n, count);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& ch = m.noise()[static_cast<std::size_t>(i)];
        const auto f = eval_on_grid(ch.coloring, grid);
        for (std::size_t k = 0; k < count; ++k) {
            noise(i, static_cast<Eigen::Index>(k)) = ch.variance * std::norm(f[k]);
            if (!(noise(i, static_cast<Eigen::Index>(k)) > 0.0)) {
                throw std::invalid_argument("noise spectrum of channel " + std::to_string(i + 1) +
                                            " vanishes at grid index " + std::to_string(k));
            }
        }
    }

    const ComplexMatrixField transfer = matrix_inverse_field(ComplexMatrixField(std::move(system)));
    std::vector<Eigen::MatrixXcd> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const Eigen::MatrixXcd& t = transfer[k];
        Eigen::MatrixXcd s = t * noise.col(static_cast<Eigen::Index>(k)).asDiagonal() * t.adjoint();
        values.emplace_back(0.5 * (s + s.adjoint()));
    }
    return SpectralDensity(grid, ComplexMatrixField(std::move(values)));
}

Eigen::MatrixXd simulate(const Ldim& m, std::size_t samples, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(m.size());
    const auto count = static_cast<Eigen::Index>(samples);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd white(n, count);
    for (Eigen::Index t = 0; t < count; ++t)
        for (Eigen::Index i = 0; i < n; ++i) white(i, t) = gauss(rng);

    Eigen::MatrixXd e(n, count);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& ch = m.noise()[static_cast<std::size_t>(i)];
        white.row(i) *= std::sqrt(ch.variance);
        Section coloring(ch.coloring);
        for (Eigen::Index t = 0; t < count; ++t) e(i, t) = coloring.step(white, i, t);
    }
    white.resize(0, 0);

    // Incoming links grouped by target.
    std::vector<std::vector<std::pair<Node, Section>>> incoming(m.size());
    for (const auto& l : m.links()) incoming[l.to].emplace_back(l.from, Section(l.transfer));

    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, count);
    for (Eigen::Index t = 0; t < count; ++t) {
        for (Node j : m.feedthrough_order()) {
            const auto row = static_cast<Eigen::Index>(j);
            double v = e(row, t);
            for (auto& [from, section] : incoming[j]) v += section.step(y, static_cast<Eigen::Index>(from), t);
            if (!(std::abs(v) <= 1e9)) {
                throw DivergenceDetected("sample of y" + std::to_string(j + 1) + " diverged at t=" +
                                         std::to_string(t));
            }
            y(row, t) = v;
        }
    }
    return y;
}

}  // namespace utfsr
