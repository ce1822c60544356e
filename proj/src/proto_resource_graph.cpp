#include "blindsim/proto/phase1.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace blindsim::proto {

using mbqc::StreamingGraphEngine;

bool ResourceLayout::exists(int id) const {
    if (id < 0) return false;
    const int kind = id / n, i = id % n;
    switch (kind) {
        case 0: return true;                       // out
        case 1: return true;                       // pend
        case 2: return rails && i < n - 1;         // tap
        case 3: return rails && i >= 1;            // tap_exit
        case 4: return rails && i < n - 1;         // rail
        case 5: return rails && i < n - 1;         // rail2
        case 6: return rails && i < n - 2;         // link
        case 7: return rails && i < n - 2;         // link2
        default: return false;
    }
}

std::vector<int> ResourceLayout::adjacency(int id) const {
    if (!exists(id)) throw std::invalid_argument("vertex does not exist in layout");
    const int kind = id / n, i = id % n;
    std::vector<int> adj;
    auto push = [&](int v) {
        if (exists(v)) adj.push_back(v);
    };
    switch (kind) {
        case 0: // out(i)
            push(pend(i));
            push(tap(i));
            push(tap_exit(i));
            break;
        case 1: push(out(i)); break; // pend
        case 2:                      // tap(i): out(i) - t(i) - r(i)
            push(out(i));
            push(rail(i));
            break;
        case 3: // tap_exit(i): out(i) - tp(i) - rp(i-1)
            push(out(i));
            push(rail2(i - 1));
            break;
        case 4: // rail(i): t(i), rp(i), lp(i-1)
            push(tap(i));
            push(rail2(i));
            if (i >= 1) push(link2(i - 1));
            break;
        case 5: // rail2(i): r(i), tp(i+1), l(i)
            push(rail(i));
            push(tap_exit(i + 1));
            push(link(i));
            break;
        case 6: // link(i): rp(i) - l(i) - lp(i)
            push(rail2(i));
            push(link2(i));
            break;
        case 7: // link2(i): l(i) - lp(i) - r(i+1)
            push(link(i));
            push(rail(i + 1));
            break;
        default: break;
    }
    return adj;
}

std::vector<int> ResourceLayout::send_order() const {
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        if (exists(tap_exit(i))) order.push_back(tap_exit(i));
        if (exists(tap(i))) order.push_back(tap(i));
        order.push_back(pend(i));
        if (exists(rail(i))) order.push_back(rail(i));
        if (exists(rail2(i))) order.push_back(rail2(i));
        if (exists(link(i))) order.push_back(link(i));
        if (exists(link2(i))) order.push_back(link2(i));
    }
    return order;
}

std::vector<int> ResourceLayout::register_order() const {
    std::vector<int> order = send_order();
    for (int i = 0; i < n; ++i) order.push_back(out(i));
    return order;
}

ResourceLayout resource_layout(int n, const mbqc::GraphSpec& g_graph) {
    if (n <= 0 || n % 3 != 0) throw std::invalid_argument("position count must be a positive multiple of 3");
    if (g_graph.vertex_count != n / 3) throw std::invalid_argument("resource graph must have N/3 vertices");
    for (const auto& [a, b] : g_graph.edges)
        if (b != a + 1) throw std::invalid_argument("preparation supports path-shaped resource graphs only");
    ResourceLayout layout;
    layout.n = n;
    layout.rails = !g_graph.edges.empty();
    return layout;
}

SteeringScript steering_script(const ResourceLayout& layout, const PermutationTag& tag,
                               const mbqc::GraphSpec& g_graph) {
    if (tag.n() != layout.n) throw std::invalid_argument("permutation size mismatch");
    const int n = layout.n;

    // Routes: one per resource edge (k, k+1), fusing the k-th and (k+1)-th
    // computation positions. Route (p,q) walks t(p), rail cells p..q-1 with
    // their link pairs, then tp(q) into out(q): 4(q-p) measured qubits.
    struct Route {
        int p, q;
    };
    std::vector<Route> routes;
    for (const auto& [a, b] : g_graph.edges) routes.push_back({tag.position_of_slot(a), tag.position_of_slot(b)});
    if (!routes.empty() && !layout.rails) throw std::invalid_argument("layout has no rails for routes");

    auto on_route_cell = [&](int i) {
        for (const auto& r : routes)
            if (r.p <= i && i < r.q) return true;
        return false;
    };
    auto on_route_link = [&](int i) {
        for (const auto& r : routes)
            if (r.p <= i && i < r.q - 1) return true;
        return false;
    };
    auto route_start = [&](int i) {
        for (const auto& r : routes)
            if (r.p == i) return true;
        return false;
    };
    auto route_end = [&](int i) {
        for (const auto& r : routes)
            if (r.q == i) return true;
        return false;
    };

    SteeringScript script;
    std::vector<SteeringStep> carves, steers;
    for (int i = 0; i < n; ++i) {
        if (layout.exists(layout.tap_exit(i))) {
            if (route_end(i)) {
                // measured at its chain slot, after rail2(i-1)
            } else {
                carves.push_back({layout.tap_exit(i), false, -1});
            }
        }
        if (layout.exists(layout.tap(i)) && !route_start(i)) carves.push_back({layout.tap(i), false, -1});
        if (tag.role(i) != Role::TrapZ) carves.push_back({layout.pend(i), false, -1});
        if (layout.exists(layout.rail(i)) && !on_route_cell(i)) {
            carves.push_back({layout.rail(i), false, -1});
            carves.push_back({layout.rail2(i), false, -1});
        }
        if (layout.exists(layout.link(i)) && !on_route_link(i)) {
            carves.push_back({layout.link(i), false, -1});
            carves.push_back({layout.link2(i), false, -1});
        }
    }
    // carves first: measurement operators on distinct qubits commute, so this
    // evaluation order realizes the same instrument as the send order, and it
    // keeps the frame rules inside their exact domains.
    script.steps = std::move(carves);
    for (int i = 0; i < n; ++i)
        if (tag.role(i) == Role::TrapZ) steers.push_back({layout.pend(i), true, layout.out(i)});
    for (const auto& r : routes) {
        steers.push_back({layout.tap(r.p), true, layout.rail(r.p)});
        for (int c = r.p; c < r.q; ++c) {
            steers.push_back({layout.rail(c), true, layout.rail2(c)});
            const bool last_cell = (c == r.q - 1);
            steers.push_back({layout.rail2(c), true, last_cell ? layout.tap_exit(r.q) : layout.link(c)});
            if (!last_cell) {
                steers.push_back({layout.link(c), true, layout.link2(c)});
                steers.push_back({layout.link2(c), true, layout.rail(c + 1)});
            }
        }
        steers.push_back({layout.tap_exit(r.q), true, layout.out(r.q)});
    }
    script.steps.insert(script.steps.end(), steers.begin(), steers.end());
    return script;
}

namespace {

// Lazily materializes `id` and its edges toward already-created vertices.
template <typename CreateFn, typename EntangleFn>
void materialize(const ResourceLayout& layout, int id, std::set<int>& created, CreateFn&& create,
                 EntangleFn&& entangle) {
    if (created.count(id)) return;
    create(id);
    created.insert(id);
    for (int w : layout.adjacency(id))
        if (created.count(w)) entangle(id, w);
}

} // namespace

Phase1Result run_phase1_honest(const ResourceLayout& layout, const SteeringScript& script,
                               mbqc::OutcomeSource& src) {
    StreamingGraphEngine eng;
    std::set<int> created;
    auto create = [&](int v) { eng.create(v); };
    auto entangle = [&](int a, int b) { eng.entangle(a, b); };

    Phase1Result res{linalg::StateVector::basis(0, 0), mbqc::ByproductFrame::zero(layout.n), {}};
    for (const auto& step : script.steps) {
        materialize(layout, step.vertex, created, create, entangle);
        for (int w : layout.adjacency(step.vertex)) materialize(layout, w, created, create, entangle);
        if (step.xy) {
            eng.measure_xy(step.vertex, 0.0, step.successor, src);
        } else {
            eng.measure_z(step.vertex, src);
        }
    }
    // outputs that never interacted (possible only in degenerate layouts)
    for (int i = 0; i < layout.n; ++i) materialize(layout, layout.out(i), created, create, entangle);

    std::vector<int> outs;
    for (int i = 0; i < layout.n; ++i) outs.push_back(layout.out(i));
    res.bob_state = eng.state_in_order(outs);
    for (int i = 0; i < layout.n; ++i) {
        const auto f = eng.frame(layout.out(i));
        res.q.x[static_cast<size_t>(i)] = f.x;
        res.q.z[static_cast<size_t>(i)] = f.z;
    }
    res.raw_outcomes = eng.raw_outcomes();
    return res;
}

QByproductMap phase1_q_map(const ResourceLayout& layout, const SteeringScript& script) {
    // Symbolic twin of the streaming engine over GF(2): frames are masks over
    // raw-outcome bits, one bit per script step.
    struct SymFrame {
        std::uint64_t x = 0, z = 0;
    };
    std::map<int, SymFrame> frames;
    std::map<int, std::set<int>> adj;
    std::set<int> created;
    if (script.steps.size() > 64) throw std::invalid_argument("too many preparation steps for the symbolic map");

    auto create = [&](int v) {
        frames[v] = SymFrame{};
        adj[v] = {};
    };
    auto entangle = [&](int a, int b) {
        adj[a].insert(b);
        adj[b].insert(a);
        frames[a].z ^= frames[b].x;
        frames[b].z ^= frames[a].x;
    };
    auto remove = [&](int v) {
        for (int w : adj[v]) adj[w].erase(v);
        adj.erase(v);
        frames.erase(v);
    };

    int bit = 0;
    for (const auto& step : script.steps) {
        materialize(layout, step.vertex, created, create, entangle);
        for (int w : layout.adjacency(step.vertex)) materialize(layout, w, created, create, entangle);
        const std::uint64_t raw = std::uint64_t{1} << bit++;
        if (step.xy) {
            const std::uint64_t ideal = raw ^ frames[step.vertex].z;
            const int succ = step.successor;
            frames[succ].x ^= ideal;
            for (int nb : adj[succ])
                if (nb != step.vertex) frames[nb].z ^= ideal;
            remove(step.vertex);
        } else {
            const std::uint64_t ideal = raw ^ frames[step.vertex].x;
            for (int nb : adj[step.vertex]) frames[nb].z ^= ideal;
            remove(step.vertex);
        }
    }

    QByproductMap map;
    map.positions = layout.n;
    map.raw_bits = bit;
    for (int i = 0; i < layout.n; ++i) {
        materialize(layout, layout.out(i), created, create, entangle);
        map.x_rows.push_back(frames[layout.out(i)].x);
        map.z_rows.push_back(frames[layout.out(i)].z);
    }
    return map;
}

std::vector<std::vector<std::pair<int, int>>> QByproductMap::support_on(
    const std::vector<int>& positions) const {
    // Columns of the restricted map live in F_2^{2k}; enumerate their span.
    const int k = static_cast<int>(positions.size());
    std::vector<std::uint64_t> slots(static_cast<size_t>(2 * k), 0);
    std::vector<std::uint64_t> basis;
    for (int b = 0; b < raw_bits; ++b) {
        std::uint64_t col = 0;
        for (int j = 0; j < k; ++j) {
            const int p = positions[static_cast<size_t>(j)];
            if ((x_rows[static_cast<size_t>(p)] >> b) & 1) col |= std::uint64_t{1} << (2 * j);
            if ((z_rows[static_cast<size_t>(p)] >> b) & 1) col |= std::uint64_t{1} << (2 * j + 1);
        }
        for (int bitpos = 2 * k - 1; bitpos >= 0 && col; --bitpos) {
            if (!((col >> bitpos) & 1)) continue;
            if (!slots[static_cast<size_t>(bitpos)]) {
                slots[static_cast<size_t>(bitpos)] = col;
                basis.push_back(col);
                col = 0;
            } else {
                col ^= slots[static_cast<size_t>(bitpos)];
            }
        }
    }
    std::vector<std::uint64_t> span{0};
    for (std::uint64_t v : basis) {
        const std::size_t sz = span.size();
        for (std::size_t i = 0; i < sz; ++i) span.push_back(span[i] ^ v);
    }
    std::sort(span.begin(), span.end());
    std::vector<std::vector<std::pair<int, int>>> out;
    for (std::uint64_t s : span) {
        std::vector<std::pair<int, int>> pattern;
        for (int j = 0; j < k; ++j)
            pattern.emplace_back(static_cast<int>((s >> (2 * j)) & 1), static_cast<int>((s >> (2 * j + 1)) & 1));
        out.push_back(std::move(pattern));
    }
    return out;
}

} // namespace blindsim::proto
