#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

namespace utfsr {

/// Zero-based node index; node k is the process y_{k+1}.
using Node = std::size_t;

/// Unordered pair stored with a < b.
struct UndirectedEdge {
    Node a = 0;
    Node b = 0;

    UndirectedEdge() = default;
    UndirectedEdge(Node x, Node y);

    bool contains(Node v) const { return v == a || v == b; }
    Node other(Node v) const { return v == a ? b : a; }

    friend auto operator<=>(const UndirectedEdge&, const UndirectedEdge&) = default;
};

/// Directed edge from -> to, meaning y_from is a parent of y_to.
struct DirectedEdge {
    Node from = 0;
    Node to = 0;

    friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

using Triangle = std::array<Node, 3>;

class DirectedGraph {
public:
    explicit DirectedGraph(std::size_t n = 0) : n_(n) {}
    DirectedGraph(std::size_t n, const std::vector<DirectedEdge>& edges);

    void add_edge(Node from, Node to);

    std::size_t size() const { return n_; }
    const std::set<DirectedEdge>& edges() const { return edges_; }
    bool has_edge(Node from, Node to) const { return edges_.contains({from, to}); }
    std::vector<Node> parents(Node v) const;
    std::vector<Node> children(Node v) const;

    friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

private:
    std::size_t n_;
    std::set<DirectedEdge> edges_;
};

class UndirectedGraph {
public:
    explicit UndirectedGraph(std::size_t n = 0) : n_(n) {}
    UndirectedGraph(std::size_t n, const std::vector<UndirectedEdge>& edges);

    void add_edge(Node x, Node y);
    void remove_edge(const UndirectedEdge& e) { edges_.erase(e); }

    std::size_t size() const { return n_; }
    const std::set<UndirectedEdge>& edges() const { return edges_; }
    bool has_edge(Node x, Node y) const { return x != y && edges_.contains(UndirectedEdge(x, y)); }
    /// Sorted neighbor list N(v).
    std::vector<Node> neighbors(Node v) const;
    bool is_subgraph_of(const UndirectedGraph& other) const;

    friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

private:
    std::size_t n_;
    std::set<UndirectedEdge> edges_;
};

/// Removes orientation.
UndirectedGraph skeleton(const DirectedGraph& g);

/// Skeleton plus an edge between every pair of coparents.
UndirectedGraph moral_graph(const DirectedGraph& g);

/// Neighbors of j in the moral graph.
std::vector<Node> markov_blanket(const DirectedGraph& g, Node j);

/// All 3-cliques, each once as (a < b < c), in lexicographic order.
std::vector<Triangle> enumerate_triangles(const UndirectedGraph& g);

/// Pairs (a < b) with a -> b and b -> a both present.
std::vector<UndirectedEdge> two_cycles(const DirectedGraph& g);

/// Edges of a but not of b.
std::vector<UndirectedEdge> edge_difference(const UndirectedGraph& a, const UndirectedGraph& b);

}  // namespace utfsr
