#include "utfsr/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "dft.hpp"
#include "utfsr/errors.hpp"

namespace utfsr {

namespace {

constexpr double kTailFraction = 1e-6;
constexpr double kMinRcond = 1e-12;
constexpr double kRidgeScale = 1e-10;
// Filters whose output would carry less than this fraction of the target's
// standard deviation are treated as identically zero.
constexpr double kNullFilter = 1e-9;

bool is_null_filter(const WienerResult& r, const std::map<Node, double>& variance, double target_var) {
    if (!(target_var > 0.0)) return true;
    double energy = 0.0;
    for (const auto& [key, c] : r.coefficients) energy += c * c * variance.at(key.first);
    return std::sqrt(energy / target_var) < kNullFilter;
}

void zero_coefficients(WienerResult& r) {
    for (auto& entry : r.coefficients) entry.second = 0.0;
}

void finish_norms(WienerResult& r) {
    std::map<Node, double> sq;
    for (const auto& [key, c] : r.coefficients) sq[key.first] += c * c;
    for (const auto& [node, s] : sq) r.component_norms[node] = std::sqrt(s);
}

SeparationVerdict judge(double tested, const WienerResult& r, double eps) {
    SeparationVerdict v;
    const double top = r.max_component_norm();
    v.margin = top > 0.0 ? tested / top : 0.0;
    v.separated = v.margin < eps;
    v.low_confidence = r.regularized();
    return v;
}

}  // namespace

RegressorSpec::RegressorSpec(Node target, std::vector<Regressor> entries, std::size_t max_lag)
    : target_(target), entries_(std::move(entries)), max_lag_(max_lag) {
    if (max_lag_ < 1) throw std::invalid_argument("causal filters need max_lag >= 1");
    std::set<Node> seen;
    for (const auto& e : entries_) {
        if (!seen.insert(e.node).second) {
            throw std::invalid_argument("node y" + std::to_string(e.node + 1) +
                                        " listed twice in a regressor spec");
        }
        if (e.node == target_ && e.lag_class == LagClass::Present) {
            throw std::invalid_argument("the target may only enter its own regressors delayed");
        }
    }
}

double WienerResult::max_component_norm() const {
    double m = 0.0;
    for (const auto& [node, v] : component_norms) m = std::max(m, v);
    return m;
}

double WienerResult::relative_norm(Node v) const {
    const double top = max_component_norm();
    auto it = component_norms.find(v);
    if (top <= 0.0 || it == component_norms.end()) return 0.0;
    return it->second / top;
}

WienerResult noncausal_wiener(const SpectralDensity& density, Node target, const std::vector<Node>& regressors,
                              std::size_t window) {
    const auto dim = static_cast<Node>(density.dim());
    const std::size_t grid = density.grid().size();
    if (target >= dim) throw std::out_of_range("target outside density");
    if (regressors.empty()) throw std::invalid_argument("non-causal filter needs at least one regressor");
    std::set<Node> unique(regressors.begin(), regressors.end());
    if (unique.size() != regressors.size()) throw std::invalid_argument("duplicate regressor");
    for (Node v : regressors) {
        if (v >= dim) throw std::out_of_range("regressor outside density");
        if (v == target) throw std::invalid_argument("target cannot regress on itself");
    }
    if (window == 0) window = grid / 4;
    if (window > grid / 2) throw std::invalid_argument("lag window exceeds half the grid");

    const auto p = static_cast<Eigen::Index>(regressors.size());
    Eigen::MatrixXcd filter(p, static_cast<Eigen::Index>(grid));  // column k holds W(w_k)^T
    double residual = 0.0;
    std::map<Node, double> variance;
    double target_var = 0.0;
    for (std::size_t k = 0; k < grid; ++k) {
        const Eigen::MatrixXcd& s = density.at(k);
        for (Node v : regressors) variance[v] += s(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v)).real() / static_cast<double>(grid);
        target_var += s(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(target)).real() / static_cast<double>(grid);
        Eigen::MatrixXcd sxx(p, p);
        Eigen::VectorXcd sxt(p);
        for (Eigen::Index a = 0; a < p; ++a) {
            const auto ra = static_cast<Eigen::Index>(regressors[static_cast<std::size_t>(a)]);
            sxt(a) = s(ra, static_cast<Eigen::Index>(target));
            for (Eigen::Index b = 0; b < p; ++b) {
                sxx(a, b) = s(ra, static_cast<Eigen::Index>(regressors[static_cast<std::size_t>(b)]));
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sxx);
        if (!(lu.rcond() >= kMinRcond)) {
            throw SingularRegressorSpectrum("regressor spectrum singular at grid index " + std::to_string(k));
        }
        const Eigen::VectorXcd w = lu.solve(sxt);  // W^H
        filter.col(static_cast<Eigen::Index>(k)) = w.conjugate();
        residual += (s(static_cast<Eigen::Index>(target), static_cast<Eigen::Index>(target)) -
                     w.dot(sxt))
                        .real();
    }

    const auto roots = detail::unit_roots(grid);
    const double inv_n = 1.0 / static_cast<double>(grid);
    const long half = static_cast<long>(window);
    WienerResult result;
    result.residual_variance = std::max(0.0, residual * inv_n);
    double total = 0.0;
    double tail = 0.0;
    for (Eigen::Index a = 0; a < p; ++a) {
        const Node node = regressors[static_cast<std::size_t>(a)];
        for (long tau = -half; tau <= half; ++tau) {
            const std::size_t step = detail::wrap(tau, grid);
            Complex acc = 0.0;
            for (std::size_t k = 0; k < grid; ++k) {
                acc += filter(a, static_cast<Eigen::Index>(k)) * roots[(k * step) & (grid - 1)];
            }
            const double c = acc.real() * inv_n;
            result.coefficients[{node, tau}] = c;
            total += c * c;
            if (std::abs(tau) > half / 2) tail += c * c;
        }
    }
    if (is_null_filter(result, variance, target_var)) {
        zero_coefficients(result);
        total = 0.0;
    }
    for (Node node : regressors) result.zero_lag_magnitude[node] = std::abs(result.coefficients[{node, 0}]);
    if (total > 0.0 && tail >= kTailFraction * total) {
        throw TailTooHeavy("non-causal filter tail carries " + std::to_string(tail / total) +
                           " of its energy; increase the grid size or lag window");
    }
    finish_norms(result);
    return result;
}

WienerResult causal_wiener(const CovarianceSequence& cov, const RegressorSpec& spec) {
    const std::size_t m = spec.max_lag();
    if (m > cov.max_lag()) {
        throw std::invalid_argument("covariance sequence only reaches lag " + std::to_string(cov.max_lag()) +
                                    ", filter needs " + std::to_string(m));
    }
    const auto dim = static_cast<Node>(cov.dim());
    if (spec.target() >= dim) throw std::out_of_range("target outside covariance");

    std::vector<std::pair<Node, long>> columns;
    for (const auto& e : spec.entries()) {
        if (e.node >= dim) throw std::out_of_range("regressor outside covariance");
        for (std::size_t lag = e.first_lag(); lag <= m; ++lag) columns.emplace_back(e.node, static_cast<long>(lag));
    }

    WienerResult result;
    const auto target = static_cast<Eigen::Index>(spec.target());
    const double target_var = cov.entry(target, target, 0);
    result.residual_variance = target_var;
    if (columns.empty()) return result;

    const auto p = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd gram(p, p);
    Eigen::VectorXd rhs(p);
    for (Eigen::Index c1 = 0; c1 < p; ++c1) {
        const auto [n1, l1] = columns[static_cast<std::size_t>(c1)];
        rhs(c1) = cov.entry(target, static_cast<Eigen::Index>(n1), l1);
        for (Eigen::Index c2 = c1; c2 < p; ++c2) {
            const auto [n2, l2] = columns[static_cast<std::size_t>(c2)];
            gram(c1, c2) = cov.entry(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2), l2 - l1);
            gram(c2, c1) = gram(c1, c2);
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinRcond)) {
        result.ridge = kRidgeScale * gram.trace();
        gram.diagonal().array() += result.ridge;
        llt.compute(gram);
        if (llt.info() != Eigen::Success || !(llt.rcond() > 0.0)) {
            throw GramSingular("regressor Gram matrix is singular even after regularization");
        }
    }
    Eigen::VectorXd beta = llt.solve(rhs);
    std::map<Node, double> variance;
    for (const auto& e : spec.entries()) variance[e.node] = cov.entry(static_cast<Eigen::Index>(e.node), static_cast<Eigen::Index>(e.node), 0);
    {
        WienerResult probe;
        for (Eigen::Index c = 0; c < p; ++c) probe.coefficients[columns[static_cast<std::size_t>(c)]] = beta(c);
        if (is_null_filter(probe, variance, target_var)) beta.setZero();
    }

    const long tail_start = static_cast<long>(m - m / 4);
    double total = 0.0;
    double tail = 0.0;
    for (Eigen::Index c = 0; c < p; ++c) {
        const auto key = columns[static_cast<std::size_t>(c)];
        const double b = beta(c);
        result.coefficients[key] = b;
        total += b * b;
        if (m >= 4 && key.second > tail_start) tail += b * b;
    }
    if (total > 0.0 && tail >= kTailFraction * total) {
        throw TailTooHeavy("causal filter tail carries " + std::to_string(tail / total) +
                           " of its squared norm; increase the max lag");
    }
    for (const auto& e : spec.entries()) {
        if (e.lag_class == LagClass::Present) result.zero_lag_magnitude[e.node] = std::abs(result.coefficients[{e.node, 0}]);
    }
    result.residual_variance = std::max(0.0, target_var - beta.dot(rhs));
    finish_norms(result);
    return result;
}

SeparationVerdict wsep(const SpectralDensity& density, Node j, const std::vector<Node>& cond, Node i, double eps,
                       std::size_t window) {
    if (i == j) throw std::invalid_argument("wsep needs distinct target and tested node");
    if (std::find(cond.begin(), cond.end(), i) != cond.end() || std::find(cond.begin(), cond.end(), j) != cond.end()) {
        throw std::invalid_argument("conditioning set must exclude target and tested node");
    }
    std::vector<Node> regressors = cond;
    regressors.push_back(i);
    const WienerResult r = noncausal_wiener(density, j, regressors, window);
    SeparationVerdict v = judge(r.component_norms.at(i), r, eps);
    v.target = j;
    for (Node c : cond) v.conditioning.push_back(present(c));
    v.tested = present(i);
    return v;
}

SeparationVerdict cwsep(const CovarianceSequence& cov, Node j, const std::vector<Regressor>& cond, Regressor tested,
                        std::size_t max_lag, double eps) {
    if (tested.node == j && tested.lag_class == LagClass::Present) {
        throw std::invalid_argument("cwsep cannot test the target's own present value");
    }
    // A delayed test of a node already conditioned on with its present value
    // examines lags 1..M of that single present-class component.
    const bool merged = tested.lag_class == LagClass::Delayed &&
                        std::find(cond.begin(), cond.end(), present(tested.node)) != cond.end();
    std::vector<Regressor> entries = cond;
    if (!merged) entries.push_back(tested);
    const WienerResult r = causal_wiener(cov, RegressorSpec(j, entries, max_lag));
    double norm = 0.0;
    if (merged) {
        for (const auto& [key, c] : r.coefficients)
            if (key.first == tested.node && key.second >= 1) norm += c * c;
        norm = std::sqrt(norm);
    } else {
        norm = r.component_norms.at(tested.node);
    }
    SeparationVerdict v = judge(norm, r, eps);
    v.target = j;
    v.conditioning = cond;
    v.tested = tested;
    return v;
}

SeparationVerdict strictly_causal_component(const CovarianceSequence& cov, Node j, Node i,
                                            const std::vector<Node>& splus, const std::vector<Node>& sminus,
                                            std::size_t max_lag, double eps) {
    if (i == j) throw std::invalid_argument("strict causality needs distinct target and tested node");
    std::vector<Regressor> entries;
    for (Node v : splus) entries.push_back(present(v));
    for (Node v : sminus) entries.push_back(delayed(v));
    std::vector<Regressor> all = entries;
    all.push_back(present(i));
    const WienerResult r = causal_wiener(cov, RegressorSpec(j, all, max_lag));
    SeparationVerdict v = judge(r.zero_lag_magnitude.at(i), r, eps);
    v.target = j;
    v.conditioning = std::move(entries);
    v.tested = present(i);
    return v;
}

}  // namespace utfsr
