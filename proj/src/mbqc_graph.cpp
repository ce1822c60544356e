#include "blindsim/mbqc/graph.hpp"

#include <json.hpp>
#include <stdexcept>

namespace blindsim::mbqc {

void GraphSpec::add_edge(int a, int b) {
    if (a == b) throw std::invalid_argument("self-loop");
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
}

bool GraphSpec::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return edges.count({a, b}) > 0;
}

void GraphSpec::validate() const {
    if (vertex_count < 0) throw std::invalid_argument("negative vertex count");
    for (const auto& [a, b] : edges) {
        if (a == b) throw std::invalid_argument("self-loop");
        if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
            throw std::invalid_argument("edge references invalid vertex");
    }
    if (!layer_of.empty() && static_cast<int>(layer_of.size()) != vertex_count)
        throw std::invalid_argument("layer_of size mismatch");
}

GraphSpec GraphSpec::linear(int n) {
    GraphSpec g;
    g.vertex_count = n;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    g.layer_of.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) g.layer_of[static_cast<size_t>(i)] = i;
    return g;
}

GraphSpec GraphSpec::ladder(int n) {
    GraphSpec g;
    g.vertex_count = 2 * n;
    for (int i = 0; i + 1 < n; ++i) {
        g.add_edge(i, i + 1);
        g.add_edge(n + i, n + i + 1);
    }
    for (int i = 0; i < n; ++i) g.add_edge(i, n + i);
    g.layer_of.resize(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i) g.layer_of[static_cast<size_t>(i)] = g.layer_of[static_cast<size_t>(n + i)] = i;
    return g;
}

GraphSpec GraphSpec::edgeless(int n) {
    GraphSpec g;
    g.vertex_count = n;
    g.layer_of.assign(static_cast<size_t>(n), 0);
    return g;
}

std::string GraphSpec::to_json() const {
    nlohmann::json j;
    j["vertices"] = vertex_count;
    auto arr = nlohmann::json::array();
    for (const auto& [a, b] : edges) arr.push_back({a, b});
    j["edges"] = arr;
    j["layers"] = layer_of;
    return j.dump();
}

GraphSpec GraphSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    GraphSpec g;
    g.vertex_count = j.at("vertices").get<int>();
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    if (j.contains("layers")) g.layer_of = j.at("layers").get<std::vector<int>>();
    g.validate();
    return g;
}

} // namespace blindsim::mbqc
