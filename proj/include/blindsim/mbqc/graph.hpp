#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace blindsim::mbqc {

// Undirected graph underlying a cluster state. Vertices are 0..vertex_count-1;
// layer_of supports "last layer" conventions for lattice-shaped graphs.
struct GraphSpec {
    int vertex_count = 0;
    std::set<std::pair<int, int>> edges; // normalized a < b
    std::vector<int> layer_of;           // empty means all layer 0

    void add_edge(int a, int b);
    bool has_edge(int a, int b) const;
    void validate() const;

    static GraphSpec linear(int n);
    static GraphSpec ladder(int n); // 2 x n, vertices row-major: 0..n-1 top, n..2n-1 bottom
    static GraphSpec edgeless(int n);

    std::string to_json() const;
    static GraphSpec from_json(const std::string& text);

    bool operator==(const GraphSpec& other) const = default;
};

} // namespace blindsim::mbqc
