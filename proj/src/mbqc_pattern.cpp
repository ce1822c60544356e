#include "blindsim/mbqc/pattern.hpp"

#include "blindsim/linalg/paulis.hpp"
#include "blindsim/linalg/state.hpp"

#include <json.hpp>
#include <set>
#include <stdexcept>

namespace blindsim::mbqc {

using linalg::CMatrix;

void MeasurementPattern::validate(const GraphSpec& graph) const {
    std::set<int> measured;
    auto check_vertex = [&](int v) {
        if (v < 0 || v >= graph.vertex_count) throw std::invalid_argument("pattern vertex out of range");
    };
    for (const auto& step : steps) {
        check_vertex(step.vertex);
        if (measured.count(step.vertex)) throw std::invalid_argument("vertex measured twice");
        for (int d : step.s_domain)
            if (!measured.count(d)) throw std::invalid_argument("adaptivity references a later or unmeasured vertex");
        for (int d : step.t_domain)
            if (!measured.count(d)) throw std::invalid_argument("adaptivity references a later or unmeasured vertex");
        if (step.basis.kind != BasisKind::XY && (!step.s_domain.empty() || !step.t_domain.empty()))
            throw std::invalid_argument("only XY measurements adapt");
        measured.insert(step.vertex);
    }
    std::set<int> outs;
    for (const auto& out : outputs) {
        check_vertex(out.vertex);
        if (measured.count(out.vertex)) throw std::invalid_argument("output vertex is measured");
        if (!outs.insert(out.vertex).second) throw std::invalid_argument("duplicate output vertex");
        for (int d : out.x_domain)
            if (!measured.count(d)) throw std::invalid_argument("frame domain references unmeasured vertex");
        for (int d : out.z_domain)
            if (!measured.count(d)) throw std::invalid_argument("frame domain references unmeasured vertex");
    }
    if (static_cast<int>(steps.size() + outputs.size()) > graph.vertex_count)
        throw std::invalid_argument("pattern does not fit the graph");
}

std::vector<int> ByproductFrame::q_bits() const {
    std::vector<int> q = x;
    q.insert(q.end(), z.begin(), z.end());
    return q;
}

namespace {

nlohmann::json basis_to_json(const MeasBasis& b) {
    switch (b.kind) {
        case BasisKind::XY: return {{"kind", "XY"}, {"angle", b.angle}};
        case BasisKind::PauliX: return {{"kind", "X"}};
        case BasisKind::PauliZ: return {{"kind", "Z"}};
    }
    throw std::invalid_argument("bad basis");
}

MeasBasis basis_from_json(const nlohmann::json& j) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "XY") return MeasBasis::xy(j.at("angle").get<double>());
    if (kind == "X") return MeasBasis::x();
    if (kind == "Z") return MeasBasis::z();
    throw std::invalid_argument("bad basis kind: " + kind);
}

} // namespace

std::string MeasurementPattern::to_json() const {
    nlohmann::json j;
    auto steps_arr = nlohmann::json::array();
    for (const auto& s : steps) {
        nlohmann::json js;
        js["vertex"] = s.vertex;
        js["basis"] = basis_to_json(s.basis);
        js["s_domain"] = s.s_domain;
        js["t_domain"] = s.t_domain;
        steps_arr.push_back(js);
    }
    j["steps"] = steps_arr;
    auto outs = nlohmann::json::array();
    for (const auto& o : outputs) {
        outs.push_back({{"vertex", o.vertex}, {"x_domain", o.x_domain}, {"z_domain", o.z_domain}});
    }
    j["outputs"] = outs;
    return j.dump();
}

MeasurementPattern MeasurementPattern::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MeasurementPattern p;
    for (const auto& js : j.at("steps")) {
        PatternStep s;
        s.vertex = js.at("vertex").get<int>();
        s.basis = basis_from_json(js.at("basis"));
        s.s_domain = js.at("s_domain").get<std::vector<int>>();
        s.t_domain = js.at("t_domain").get<std::vector<int>>();
        p.steps.push_back(std::move(s));
    }
    for (const auto& jo : j.at("outputs")) {
        PatternOutput o;
        o.vertex = jo.at("vertex").get<int>();
        o.x_domain = jo.at("x_domain").get<std::vector<int>>();
        o.z_domain = jo.at("z_domain").get<std::vector<int>>();
        p.outputs.push_back(std::move(o));
    }
    return p;
}

CMatrix j_gate(double theta) { return linalg::hadamard() * linalg::phase_gate(-theta); }

CompiledProgram compile_rotation_chain(const std::vector<double>& angles) {
    const int k = static_cast<int>(angles.size());
    CompiledProgram prog;
    prog.graph = GraphSpec::linear(k + 1);
    CMatrix u = CMatrix::Identity(2, 2);
    for (int j = 0; j < k; ++j) {
        PatternStep s;
        s.vertex = j;
        s.basis = MeasBasis::xy(angles[static_cast<size_t>(j)]);
        if (j >= 1) s.s_domain = {j - 1};
        if (j >= 2) s.t_domain = {j - 2};
        prog.pattern.steps.push_back(std::move(s));
        u = j_gate(angles[static_cast<size_t>(j)]) * u;
    }
    PatternOutput out;
    out.vertex = k;
    if (k >= 1) out.x_domain = {k - 1};
    if (k >= 2) out.z_domain = {k - 2};
    prog.pattern.outputs.push_back(std::move(out));
    prog.realized_unitary = u;
    return prog;
}

CompiledProgram compile_entangling_block(double theta_a, double theta_b) {
    // Vertices: 0 = wire-a input, 1 = wire-b input, 2 = wire-a output,
    // 3 = wire-b output; rung between the outputs.
    CompiledProgram prog;
    prog.graph.vertex_count = 4;
    prog.graph.add_edge(0, 2);
    prog.graph.add_edge(1, 3);
    prog.graph.add_edge(2, 3);
    prog.graph.layer_of = {0, 0, 1, 1};
    prog.pattern.steps.push_back({0, MeasBasis::xy(theta_a), {}, {}});
    prog.pattern.steps.push_back({1, MeasBasis::xy(theta_b), {}, {}});
    prog.pattern.outputs.push_back({2, {0}, {1}});
    prog.pattern.outputs.push_back({3, {1}, {0}});
    prog.realized_unitary = linalg::cz_gate() * linalg::kron(j_gate(theta_a), j_gate(theta_b));
    return prog;
}

} // namespace blindsim::mbqc
