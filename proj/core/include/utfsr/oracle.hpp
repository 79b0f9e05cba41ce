#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>

#include <Eigen/Dense>

#include "utfsr/model.hpp"
#include "utfsr/reconstruct.hpp"
#include "utfsr/wiener.hpp"

// Simulation-based and brute-force references used to check the spectral
// pipeline. Nothing here is on the reconstruction path.
namespace utfsr::oracle {

struct OlsEstimate {
    std::map<std::pair<Node, long>, double> coefficients;
    std::map<std::pair<Node, long>, double> standard_errors;
    std::size_t sample_count = 0;
};

/// Ordinary least squares of spec's target on spec's lagged regressors over a
/// sample path. The first burn_in columns are discarded.
OlsEstimate ols_fit(const Eigen::MatrixXd& samples, const RegressorSpec& spec, std::size_t burn_in);

/// ols_fit on simulate(m, samples, seed) with a burn-in of 10 * max_lag.
OlsEstimate ols_wiener(const Ldim& m, const RegressorSpec& spec, std::size_t samples, std::uint64_t seed);

/// Sample estimate of R(tau) = E[y(t) y(t - tau)^T].
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& samples, long tau);

/// Standard error of each entry of sample_covariance, from the empirical
/// variance of the lagged products (valid under weak serial dependence).
Eigen::MatrixXd sample_covariance_se(const Eigen::MatrixXd& samples, long tau);

/// Random unidirectional triangle-free model. Each node pair becomes an edge
/// with probability edge_density unless it would close a triangle; edges get
/// a random orientation and a gain drawn from [-2,-0.3] u [0.3,2], multiplied
/// by z^-1 with probability delay_prob. Draws with feedthrough cycles or an
/// unstable delay loop are rejected.
/// @throws GenerationFailed after 1000 rejected draws.
Ldim gen_utf(std::size_t n, double edge_density, double delay_prob, std::uint64_t seed);

/// Spectral radius of the one-step recursion of a model whose transfers are
/// all c or c*z^-1 (the form gen_utf produces).
double delay_loop_radius(const Ldim& m);

/// MD1/MD2/MD3 over every subset of the remaining nodes rather than a
/// neighborhood pool; reference for small models (n <= 8).
EdgeRemovalEvidence brute_force_md(const Ldim& m, UndirectedEdge edge, const ReconstructionOptions& options = {},
                                   const FrequencyGrid& grid = FrequencyGrid());

/// Same search on precomputed covariances.
EdgeRemovalEvidence brute_force_md(const CovarianceSequence& cov, UndirectedEdge edge,
                                   const ReconstructionOptions& options = {});

}  // namespace utfsr::oracle
