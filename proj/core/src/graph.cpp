#include "utfsr/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace utfsr {

namespace {

void check_node(Node v, std::size_t n) {
    if (v >= n) throw std::out_of_range("node " + std::to_string(v) + " outside graph of size " + std::to_string(n));
}

}  // namespace

UndirectedEdge::UndirectedEdge(Node x, Node y) : a(std::min(x, y)), b(std::max(x, y)) {
    if (x == y) throw std::invalid_argument("self-loop " + std::to_string(x));
}

DirectedGraph::DirectedGraph(std::size_t n, const std::vector<DirectedEdge>& edges) : n_(n) {
    for (const auto& e : edges) add_edge(e.from, e.to);
}

void DirectedGraph::add_edge(Node from, Node to) {
    check_node(from, n_);
    check_node(to, n_);
    if (from == to) throw std::invalid_argument("self-loop " + std::to_string(from));
    edges_.insert({from, to});
}

std::vector<Node> DirectedGraph::parents(Node v) const {
    std::vector<Node> out;
    for (const auto& e : edges_)
        if (e.to == v) out.push_back(e.from);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Node> DirectedGraph::children(Node v) const {
    std::vector<Node> out;
    for (const auto& e : edges_)
        if (e.from == v) out.push_back(e.to);
    return out;
}

UndirectedGraph::UndirectedGraph(std::size_t n, const std::vector<UndirectedEdge>& edges) : n_(n) {
    for (const auto& e : edges) add_edge(e.a, e.b);
}

void UndirectedGraph::add_edge(Node x, Node y) {
    check_node(x, n_);
    check_node(y, n_);
    edges_.insert(UndirectedEdge(x, y));
}

std::vector<Node> UndirectedGraph::neighbors(Node v) const {
    std::vector<Node> out;
    for (const auto& e : edges_)
        if (e.contains(v)) out.push_back(e.other(v));
    std::sort(out.begin(), out.end());
    return out;
}

bool UndirectedGraph::is_subgraph_of(const UndirectedGraph& other) const {
    return std::includes(other.edges_.begin(), other.edges_.end(), edges_.begin(), edges_.end());
}

UndirectedGraph skeleton(const DirectedGraph& g) {
    UndirectedGraph out(g.size());
    for (const auto& e : g.edges()) out.add_edge(e.from, e.to);
    return out;
}

UndirectedGraph moral_graph(const DirectedGraph& g) {
    UndirectedGraph out = skeleton(g);
    for (Node child = 0; child < g.size(); ++child) {
        const auto pa = g.parents(child);
        for (std::size_t x = 0; x < pa.size(); ++x)
            for (std::size_t y = x + 1; y < pa.size(); ++y) out.add_edge(pa[x], pa[y]);
    }
    return out;
}

std::vector<Node> markov_blanket(const DirectedGraph& g, Node j) {
    if (j >= g.size()) throw std::out_of_range("node outside graph");
    return moral_graph(g).neighbors(j);
}

std::vector<Triangle> enumerate_triangles(const UndirectedGraph& g) {
    std::vector<Triangle> out;
    for (const auto& e : g.edges()) {
        for (Node c = e.b + 1; c < g.size(); ++c) {
            if (g.has_edge(e.a, c) && g.has_edge(e.b, c)) out.push_back({e.a, e.b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<UndirectedEdge> two_cycles(const DirectedGraph& g) {
    std::vector<UndirectedEdge> out;
    for (const auto& e : g.edges()) {
        if (e.from < e.to && g.has_edge(e.to, e.from)) out.emplace_back(e.from, e.to);
    }
    return out;
}

std::vector<UndirectedEdge> edge_difference(const UndirectedGraph& a, const UndirectedGraph& b) {
    std::vector<UndirectedEdge> out;
    std::set_difference(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                        std::back_inserter(out));
    return out;
}

}  // namespace utfsr
