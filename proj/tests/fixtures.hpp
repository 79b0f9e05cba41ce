#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "utfsr/graph.hpp"
#include "utfsr/io.hpp"
#include "utfsr/model.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return UTFSR_DATA_DIR; }

inline utfsr::Ldim load(const std::string& name) {
    return utfsr::io::model_from_json(utfsr::io::read_json_file(data_dir() / (name + ".json")));
}

/// 1-based (from, to, gain) triples, direct feedthrough.
inline utfsr::Ldim static_model(std::size_t n, std::initializer_list<std::tuple<int, int, double>> gains,
                                std::vector<utfsr::NoiseChannel> noise = {}) {
    std::vector<utfsr::Link> links;
    for (const auto& [from, to, g] : gains) {
        links.push_back({static_cast<utfsr::Node>(from - 1), static_cast<utfsr::Node>(to - 1),
                         utfsr::RationalTransfer::gain(g)});
    }
    return utfsr::Ldim(n, std::move(links), std::move(noise));
}

/// Triangle 1->2 (a), 2->3 (b), 1->3 (c).
inline utfsr::Ldim cancelling_triangle(double a, double b, double c) { return static_model(3, {{1, 2, a}, {2, 3, b}, {1, 3, c}}); }

/// 1->2 (a) and 3->2 (b/(b^2+1)) with noise variances 1, 1/(b^2+1), b^2+1.
inline utfsr::Ldim collider_pair(double a, double b) {
    const double s = b * b + 1.0;
    return static_model(3, {{1, 2, a}, {3, 2, b / s}}, {{1.0}, {1.0 / s}, {s}});
}

/// Coparents 1, 2; child 3 gets -a, b; child 4 gets a, b.
inline utfsr::Ldim coparent_square(double a, double b) {
    return static_model(4, {{1, 3, -a}, {2, 3, b}, {1, 4, a}, {2, 4, b}});
}

inline utfsr::UndirectedGraph undirected(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
    utfsr::UndirectedGraph g(n);
    for (const auto& [a, b] : edges) g.add_edge(static_cast<utfsr::Node>(a - 1), static_cast<utfsr::Node>(b - 1));
    return g;
}

inline utfsr::UndirectedEdge edge(int a, int b) {
    return utfsr::UndirectedEdge(static_cast<utfsr::Node>(a - 1), static_cast<utfsr::Node>(b - 1));
}

inline utfsr::Node y(int label) { return static_cast<utfsr::Node>(label - 1); }

}  // namespace fixtures
