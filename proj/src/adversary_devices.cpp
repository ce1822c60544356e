#include "blindsim/adversary/strategy.hpp"

#include "blindsim/proto/phase1.hpp"

#include <random>
#include <stdexcept>

namespace blindsim::adversary {

using linalg::CVector;
using linalg::StateVector;

StateVector wrong_resource_state(const AdversaryStrategy& strategy, const proto::VerifySystem& sys) {
    if (strategy.kind != AdversaryStrategy::Kind::WrongResource)
        throw std::invalid_argument("not a wrong-resource strategy");
    const auto layout = proto::resource_layout(sys.n, sys.g_graph);
    const int reg = static_cast<int>(layout.register_order().size());
    const Eigen::Index dim = Eigen::Index{1} << reg;

    if (strategy.resource_kind == "zeros") return StateVector::basis(reg, 0);
    if (strategy.resource_kind == "ghz") {
        CVector v = CVector::Zero(dim);
        v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
        return StateVector(std::move(v));
    }
    if (strategy.resource_kind == "random") {
        std::mt19937_64 rng(strategy.seed);
        std::normal_distribution<double> g(0.0, 1.0);
        CVector v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = linalg::Complex(g(rng), g(rng));
        v.normalize();
        return StateVector(std::move(v));
    }
    throw std::invalid_argument("unknown wrong-resource kind: " + strategy.resource_kind);
}

} // namespace blindsim::adversary
