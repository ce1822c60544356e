#include "blindsim/adversary/strategy.hpp"

#include "blindsim/linalg/paulis.hpp"
#include "blindsim/util/random.hpp"

#include <json.hpp>
#include <cmath>
#include <stdexcept>

namespace blindsim::adversary {

using linalg::CMatrix;
using linalg::KrausChannel;
using linalg::Pauli;

linalg::KrausChannel make_site_channel(const std::string& kind, double param) {
    if (kind == "depolarize") {
        if (param < 0 || param > 1) throw std::invalid_argument("bad depolarizing strength");
        std::vector<CMatrix> ops;
        ops.push_back(std::sqrt(1.0 - param) * CMatrix::Identity(2, 2));
        for (auto p : {Pauli::X, Pauli::Y, Pauli::Z})
            ops.push_back(std::sqrt(param / 3.0) * linalg::pauli_matrix(p));
        return KrausChannel(std::move(ops));
    }
    if (kind == "dephase") {
        std::vector<CMatrix> ops;
        ops.push_back(std::sqrt(1.0 - param) * CMatrix::Identity(2, 2));
        ops.push_back(std::sqrt(param) * linalg::pauli_z());
        return KrausChannel(std::move(ops));
    }
    if (kind == "bitflip") {
        std::vector<CMatrix> ops;
        ops.push_back(std::sqrt(1.0 - param) * CMatrix::Identity(2, 2));
        ops.push_back(std::sqrt(param) * linalg::pauli_x());
        return KrausChannel(std::move(ops));
    }
    if (kind == "amplitude_damp") {
        if (param < 0 || param > 1) throw std::invalid_argument("bad damping strength");
        CMatrix k0 = CMatrix::Identity(2, 2);
        k0(1, 1) = std::sqrt(1.0 - param);
        CMatrix k1 = CMatrix::Zero(2, 2);
        k1(0, 1) = std::sqrt(param);
        return KrausChannel({k0, k1});
    }
    throw std::invalid_argument("unknown site channel kind: " + kind);
}

proto::AttackModel AdversaryStrategy::attack_model(int n) const {
    switch (kind) {
        case Kind::Honest: return proto::AttackModel::identity();
        case Kind::PauliAttack:
        case Kind::Adaptive: {
            std::vector<Pauli> p(static_cast<size_t>(n), Pauli::I);
            for (const auto& [site, pauli] : pauli_map(n)) p[static_cast<size_t>(site)] = pauli;
            return proto::AttackModel::pauli(std::move(p));
        }
        case Kind::ChannelAttack: {
            std::map<int, KrausChannel> chans;
            for (const auto& [site, ck] : site_channel_kinds) {
                if (site >= n) continue;
                chans.emplace(site, make_site_channel(ck, site_channel_params.at(site)));
            }
            for (const auto& [site, ch] : site_raw_kraus) {
                if (site >= n) continue;
                chans.emplace(site, ch);
            }
            return proto::AttackModel::local_channel(std::move(chans));
        }
        case Kind::WrongResource: {
            // replacement channel: discard whatever was prepared, emit the
            // scripted register state
            throw std::invalid_argument("wrong-resource strategies use the open resource port");
        }
    }
    throw std::invalid_argument("bad strategy kind");
}

std::map<int, Pauli> AdversaryStrategy::pauli_map(int n) const {
    std::map<int, Pauli> out;
    if (kind == Kind::PauliAttack) {
        for (const auto& [site, p] : site_paulis)
            if (site < n && p != Pauli::I) out[site] = p;
    } else if (kind == Kind::Adaptive) {
        // round-scripted: the stored map is indexed by round; rounds are the
        // send order of the computation-phase qubits
        for (const auto& [round, p] : site_paulis) {
            const int site = round % n;
            if (p != Pauli::I) out[site] = p;
        }
    }
    return out;
}

bool AdversaryStrategy::applicable(int n, proto::InputMode mode) const {
    switch (kind) {
        case Kind::Honest: return true;
        case Kind::PauliAttack:
        case Kind::Adaptive: {
            for (const auto& [site, p] : site_paulis)
                if (kind == Kind::PauliAttack && site >= n && p != Pauli::I) return false;
            return true;
        }
        case Kind::ChannelAttack: {
            // exact ideal bookkeeping for non-Pauli deviations needs the
            // classically described input
            if (mode == proto::InputMode::Teleport) return false;
            for (const auto& [site, ck] : site_channel_kinds)
                if (site >= n) return false;
            for (const auto& [site, ch] : site_raw_kraus)
                if (site >= n) return false;
            return true;
        }
        case Kind::WrongResource: return n <= 3 && mode == proto::InputMode::Folded;
    }
    return false;
}

std::string AdversaryStrategy::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case Kind::Honest: j["kind"] = "honest"; break;
        case Kind::WrongResource: j["kind"] = "wrong_resource"; break;
        case Kind::PauliAttack: j["kind"] = "pauli_attack"; break;
        case Kind::ChannelAttack: j["kind"] = "channel_attack"; break;
        case Kind::Adaptive: j["kind"] = "adaptive"; break;
    }
    j["name"] = name;
    j["seed"] = seed;
    if (!site_paulis.empty()) {
        nlohmann::json sites = nlohmann::json::array(), paulis = nlohmann::json::array();
        for (const auto& [s, p] : site_paulis) {
            sites.push_back(s);
            paulis.push_back(std::string(1, linalg::pauli_char(p)));
        }
        j["sites"] = sites;
        j["paulis"] = paulis;
    }
    if (!site_channel_kinds.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [s, ck] : site_channel_kinds) {
            nlohmann::json entry{{"site", s}, {"channel", ck}, {"param", site_channel_params.at(s)}};
            // explicit operator form alongside the named channel
            nlohmann::json kraus = nlohmann::json::array();
            for (const auto& k : make_site_channel(ck, site_channel_params.at(s)).kraus_ops()) {
                nlohmann::json mat = nlohmann::json::array();
                for (Eigen::Index r = 0; r < k.rows(); ++r) {
                    nlohmann::json row = nlohmann::json::array();
                    for (Eigen::Index c = 0; c < k.cols(); ++c)
                        row.push_back({k(r, c).real(), k(r, c).imag()});
                    mat.push_back(row);
                }
                kraus.push_back(mat);
            }
            entry["kraus_matrices"] = kraus;
            arr.push_back(entry);
        }
        j["channels"] = arr;
    }
    if (!resource_kind.empty()) j["resource"] = resource_kind;
    return j.dump();
}

AdversaryStrategy AdversaryStrategy::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    AdversaryStrategy s;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "honest") s.kind = Kind::Honest;
    else if (kind == "wrong_resource") s.kind = Kind::WrongResource;
    else if (kind == "pauli_attack") s.kind = Kind::PauliAttack;
    else if (kind == "channel_attack") s.kind = Kind::ChannelAttack;
    else if (kind == "adaptive") s.kind = Kind::Adaptive;
    else throw std::invalid_argument("unknown strategy kind: " + kind);
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sites")) {
        const auto sites = j.at("sites");
        const auto paulis = j.at("paulis");
        for (size_t i = 0; i < sites.size(); ++i)
            s.site_paulis[sites[i].get<int>()] =
                linalg::pauli_from_char(paulis[i].get<std::string>().at(0));
    }
    if (j.contains("channels")) {
        for (const auto& c : j.at("channels")) {
            const int site = c.at("site").get<int>();
            if (c.contains("channel")) {
                s.site_channel_kinds[site] = c.at("channel").get<std::string>();
                s.site_channel_params[site] = c.at("param").get<double>();
            } else if (c.contains("kraus_matrices")) {
                std::vector<CMatrix> ops;
                for (const auto& mat : c.at("kraus_matrices")) {
                    CMatrix k(mat.size(), mat.at(0).size());
                    for (size_t r = 0; r < mat.size(); ++r)
                        for (size_t col = 0; col < mat.at(r).size(); ++col)
                            k(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
                                linalg::Complex(mat.at(r).at(col).at(0).get<double>(),
                                                mat.at(r).at(col).at(1).get<double>());
                    ops.push_back(std::move(k));
                }
                s.site_raw_kraus.emplace(site, KrausChannel(std::move(ops)));
            }
        }
    }
    if (j.contains("resource")) s.resource_kind = j.at("resource").get<std::string>();
    return s;
}

std::vector<AdversaryStrategy> AdversaryStrategy::library(int n) {
    std::vector<AdversaryStrategy> lib;
    lib.push_back(AdversaryStrategy{}); // honest

    auto single = [&](int site, Pauli p) {
        AdversaryStrategy s;
        s.kind = Kind::PauliAttack;
        s.site_paulis[site] = p;
        s.name = std::string("pauli-") + linalg::pauli_char(p) + "@" + std::to_string(site);
        return s;
    };
    lib.push_back(single(0, Pauli::X));
    lib.push_back(single(0, Pauli::Z));
    lib.push_back(single(n / 2, Pauli::Y));
    lib.push_back(single(n - 1, Pauli::Z));

    {
        AdversaryStrategy s;
        s.kind = Kind::PauliAttack;
        s.site_paulis[0] = Pauli::X;
        s.site_paulis[n - 1] = Pauli::Z;
        s.name = "pauli-X@0,Z@last";
        lib.push_back(s);
        AdversaryStrategy t;
        t.kind = Kind::PauliAttack;
        t.site_paulis[0] = Pauli::Y;
        t.site_paulis[1] = Pauli::Y;
        t.name = "pauli-Y@0,Y@1";
        lib.push_back(t);
    }
    {
        AdversaryStrategy s;
        s.kind = Kind::Adaptive;
        s.site_paulis[0] = Pauli::Z;
        s.site_paulis[2] = Pauli::X;
        s.name = "adaptive-roundscript";
        lib.push_back(s);
    }
    {
        AdversaryStrategy s;
        s.kind = Kind::ChannelAttack;
        s.site_channel_kinds[0] = "depolarize";
        s.site_channel_params[0] = 0.75;
        s.name = "depolarize@0";
        lib.push_back(s);
        AdversaryStrategy t;
        t.kind = Kind::ChannelAttack;
        t.site_channel_kinds[n - 1] = "amplitude_damp";
        t.site_channel_params[n - 1] = 0.6;
        t.name = "amp-damp@last";
        lib.push_back(t);
        AdversaryStrategy u;
        u.kind = Kind::ChannelAttack;
        u.site_channel_kinds[1] = "dephase";
        u.site_channel_params[1] = 0.5;
        u.name = "dephase@1";
        lib.push_back(u);
    }
    {
        AdversaryStrategy s;
        s.kind = Kind::WrongResource;
        s.resource_kind = "zeros";
        s.name = "wrong-resource-zeros";
        lib.push_back(s);
        AdversaryStrategy t;
        t.kind = Kind::WrongResource;
        t.resource_kind = "random";
        t.seed = 1234;
        t.name = "wrong-resource-random";
        lib.push_back(t);
        AdversaryStrategy u;
        u.kind = Kind::WrongResource;
        u.resource_kind = "ghz";
        u.name = "wrong-resource-ghz";
        lib.push_back(u);
    }
    return lib;
}

proto::DeviceBehavior cheating_device(const std::string& kind) {
    using proto::DeviceBehavior;
    if (kind == "0" || kind == "honest")
        throw std::invalid_argument("the honest device is not a cheating device; use the honest path");
    CMatrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    if (kind == "always_accept") return DeviceBehavior::fixed_output(plus, 0, "always_accept");
    if (kind == "always_reject") return DeviceBehavior::fixed_output(plus, 1, "always_reject");
    if (kind == "noisy_honest") return DeviceBehavior::noisy_honest(0.35, "noisy_honest");
    throw std::invalid_argument("unknown cheating device: " + kind);
}

} // namespace blindsim::adversary
