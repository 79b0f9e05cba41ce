#include <doctest.h>

#include "fixtures.hpp"
#include "utfsr/graph.hpp"

using namespace utfsr;
using fixtures::undirected;
using fixtures::y;

namespace {

DirectedGraph directed(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
    DirectedGraph g(n);
    for (const auto& [from, to] : edges) g.add_edge(y(from), y(to));
    return g;
}

const DirectedGraph diamond = directed(4, {{4, 1}, {1, 2}, {2, 3}, {4, 3}});
// y1 and y4 are coparents of y3; y1 also feeds y2.
const DirectedGraph blanket_example = directed(4, {{1, 2}, {1, 3}, {4, 3}});

}  // namespace

TEST_CASE("edges reject self-loops") {
    CHECK_THROWS_AS(UndirectedEdge(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(DirectedGraph(3).add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(DirectedGraph(3).add_edge(0, 3), std::out_of_range);
    const UndirectedEdge e(3, 1);
    CHECK(e.a == 1);
    CHECK(e.b == 3);
    CHECK(e.other(1) == 3);
}

TEST_CASE("skeleton") {
    CHECK(skeleton(directed(4, {{4, 1}, {1, 2}})) == undirected(4, {{1, 4}, {1, 2}}));
    CHECK(skeleton(diamond) == undirected(4, {{1, 4}, {1, 2}, {2, 3}, {3, 4}}));
    CHECK(skeleton(DirectedGraph(3)).edges().empty());
}

TEST_CASE("moral graph") {
    CHECK(moral_graph(blanket_example) == undirected(4, {{1, 2}, {1, 3}, {3, 4}, {1, 4}}));
    CHECK(moral_graph(diamond) == undirected(4, {{1, 4}, {1, 2}, {2, 3}, {3, 4}, {2, 4}}));
    CHECK(moral_graph(directed(3, {{1, 2}, {2, 3}})) == undirected(3, {{1, 2}, {2, 3}}));
}

TEST_CASE("markov blanket") {
    CHECK(markov_blanket(blanket_example, y(1)) == std::vector<Node>{y(2), y(3), y(4)});
    CHECK(markov_blanket(directed(3, {{1, 2}}), y(3)).empty());
    CHECK(markov_blanket(diamond, y(3)) == std::vector<Node>{y(2), y(4)});
}

TEST_CASE("triangle enumeration") {
    const auto tri = enumerate_triangles(undirected(4, {{1, 4}, {1, 2}, {2, 3}, {3, 4}, {2, 4}}));
    REQUIRE(tri.size() == 2);
    CHECK(tri[0] == Triangle{y(1), y(2), y(4)});
    CHECK(tri[1] == Triangle{y(2), y(3), y(4)});
    CHECK(enumerate_triangles(undirected(4, {{1, 2}, {2, 3}, {3, 4}, {1, 4}})).empty());
    CHECK(enumerate_triangles(undirected(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}})).size() == 4);
}

TEST_CASE("two-cycles and edge differences") {
    CHECK(two_cycles(directed(3, {{1, 2}, {2, 1}, {2, 3}})) == std::vector<UndirectedEdge>{fixtures::edge(1, 2)});
    const auto a = undirected(3, {{1, 2}, {2, 3}});
    const auto b = undirected(3, {{1, 2}, {1, 3}});
    CHECK(edge_difference(a, b) == std::vector<UndirectedEdge>{fixtures::edge(2, 3)});
    CHECK(undirected(3, {{1, 2}}).is_subgraph_of(a));
    CHECK_FALSE(a.is_subgraph_of(b));
    CHECK(a.neighbors(y(2)) == std::vector<Node>{y(1), y(3)});
}
