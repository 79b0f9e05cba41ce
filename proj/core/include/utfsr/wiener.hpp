#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "utfsr/graph.hpp"
#include "utfsr/lti.hpp"
#include "utfsr/spectral.hpp"

namespace utfsr {

/// Present contributes lags 0..M of a node, Delayed contributes lags 1..M
/// (the node seen through one delay, (1/z) y_k).
enum class LagClass { Present, Delayed };

struct Regressor {
    Node node = 0;
    LagClass lag_class = LagClass::Present;

    std::size_t first_lag() const { return lag_class == LagClass::Present ? 0 : 1; }
    friend auto operator<=>(const Regressor&, const Regressor&) = default;
};

inline Regressor present(Node v) { return {v, LagClass::Present}; }
inline Regressor delayed(Node v) { return {v, LagClass::Delayed}; }

/// Regressor layout of a finite-lag causal estimator of y_target.
/// Each node appears at most once; the target only as Delayed.
class RegressorSpec {
public:
    RegressorSpec(Node target, std::vector<Regressor> entries, std::size_t max_lag);

    Node target() const { return target_; }
    const std::vector<Regressor>& entries() const { return entries_; }
    std::size_t max_lag() const { return max_lag_; }

private:
    Node target_;
    std::vector<Regressor> entries_;
    std::size_t max_lag_;
};

struct WienerResult {
    /// (node, lag) -> coefficient. Causal filters use lags >= 0; non-causal ones -L..L.
    std::map<std::pair<Node, long>, double> coefficients;
    double residual_variance = 0.0;
    /// Root sum of squares over each node's lags.
    std::map<Node, double> component_norms;
    /// |coefficient at lag 0| for nodes entering with their present value.
    std::map<Node, double> zero_lag_magnitude;
    /// Ridge added to an ill-conditioned Gram matrix (0 when none).
    double ridge = 0.0;

    bool regularized() const { return ridge > 0.0; }
    double max_component_norm() const;
    /// component / max component, 0 when the whole filter vanishes.
    double relative_norm(Node v) const;
};

struct SeparationVerdict {
    bool separated = false;
    /// Tested quantity divided by the largest component norm of the filter.
    double margin = 0.0;
    Node target = 0;
    std::vector<Regressor> conditioning;
    Regressor tested;
    /// Computed under ridge regularization.
    bool low_confidence = false;
};

inline constexpr double kDefaultEpsSep = 1e-6;
inline constexpr std::size_t kDefaultCausalLags = 32;

/// Two-sided Wiener filter W = S_{t,X} S_{X,X}^{-1}, solved per frequency and
/// inverse transformed to lags -window..window (window 0 means N/4).
/// @throws SingularRegressorSpectrum if S_{X,X} is singular at a grid point.
/// @throws TailTooHeavy if lags beyond window/2 carry >= 1e-6 of the energy.
WienerResult noncausal_wiener(const SpectralDensity& density, Node target, const std::vector<Node>& regressors,
                              std::size_t window = 0);

/// Finite-lag causal estimator from the normal equations built on R.
/// Ill-conditioned Gram matrices (rcond < 1e-12) get a 1e-10 * trace ridge.
/// @throws GramSingular if the regularized system still cannot be solved.
/// @throws TailTooHeavy if the last M/4 lags carry >= 1e-6 of the squared norm.
WienerResult causal_wiener(const CovarianceSequence& cov, const RegressorSpec& spec);

/// wsep(y_j, cond, y_i): y_i's component of the non-causal filter is zero.
SeparationVerdict wsep(const SpectralDensity& density, Node j, const std::vector<Node>& cond, Node i,
                       double eps = kDefaultEpsSep, std::size_t window = 0);

/// cwsep(y_j, cond, tested): tested's component of the causal filter is zero.
SeparationVerdict cwsep(const CovarianceSequence& cov, Node j, const std::vector<Regressor>& cond,
                        Regressor tested, std::size_t max_lag = kDefaultCausalLags,
                        double eps = kDefaultEpsSep);

/// The y_i component of the causal filter estimating y_j from
/// y_i (present) + splus (present) + sminus (delayed) has no lag-0 term.
SeparationVerdict strictly_causal_component(const CovarianceSequence& cov, Node j, Node i,
                                            const std::vector<Node>& splus, const std::vector<Node>& sminus,
                                            std::size_t max_lag = kDefaultCausalLags,
                                            double eps = kDefaultEpsSep);

}  // namespace utfsr
