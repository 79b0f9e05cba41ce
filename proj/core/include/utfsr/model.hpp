#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "utfsr/graph.hpp"
#include "utfsr/lti.hpp"
#include "utfsr/spectral.hpp"

namespace utfsr {

/// Noise PSD of one channel: variance * |coloring(e^{iw})|^2.
struct NoiseChannel {
    double variance = 1.0;
    RationalTransfer coloring = RationalTransfer::gain(1.0);

    friend bool operator==(const NoiseChannel&, const NoiseChannel&) = default;
};

/// Entry H_{to,from}: y_to receives transfer(z) * y_from.
struct Link {
    Node from = 0;
    Node to = 0;
    RationalTransfer transfer;

    friend bool operator==(const Link&, const Link&) = default;
};

/// Linear dynamic influence model y = e + H(z) y with diagonal noise spectrum.
///
/// Links with a zero transfer are dropped, so the stored links are exactly the
/// edges of the causal graph. Construction rejects self-links, duplicate
/// links and cycles among direct feedthroughs (AlgebraicLoop).
class Ldim {
public:
    /// An empty noise list means unit white noise on every channel.
    Ldim(std::size_t n, std::vector<Link> links, std::vector<NoiseChannel> noise = {});

    std::size_t size() const { return n_; }
    /// Sorted by (to, from).
    const std::vector<Link>& links() const { return links_; }
    const std::vector<NoiseChannel>& noise() const { return noise_; }
    /// H_{to,from}; the zero transfer when no link exists.
    const RationalTransfer& transfer(Node to, Node from) const;
    /// Largest polynomial degree among link and noise transfers.
    std::size_t max_lag() const;
    /// Topological order of the graph of direct feedthroughs (ties by index).
    const std::vector<Node>& feedthrough_order() const { return order_; }

private:
    std::size_t n_;
    std::vector<Link> links_;
    std::vector<NoiseChannel> noise_;
    std::vector<Node> order_;
};

struct UtfReport {
    std::vector<UndirectedEdge> two_cycles;
    std::vector<Triangle> triangles;

    bool is_utf() const { return two_cycles.empty() && triangles.empty(); }
};

/// Edge from -> to for every nonzero H_{to,from}.
DirectedGraph causal_graph(const Ldim& m);

/// Lists 2-cycles of the causal graph and triangles of its skeleton.
UtfReport validate_utf(const Ldim& m);

/// Phi_y = T Phi_e T^H with T = (I - H)^{-1}, at every grid point.
/// @throws ResolutionTooCoarse if the grid cannot resolve the model's lags.
/// @throws SingularAtFrequency if I - H is singular somewhere on the grid.
SpectralDensity psd(const Ldim& m, const FrequencyGrid& grid);

/// n x T sample path from zero initial conditions, seeded Gaussian noise.
/// Direct feedthroughs are resolved in feedthrough_order() at each step.
/// @throws DivergenceDetected if any |y_i(t)| exceeds 1e9.
Eigen::MatrixXd simulate(const Ldim& m, std::size_t samples, std::uint64_t seed);

}  // namespace utfsr
