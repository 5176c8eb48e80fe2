#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrq/spin.hpp"

namespace mrq {

inline constexpr int kMaxCircuitQubits = 12;

/// Dense state vector over n qubits, little-endian (qubit 0 is the least
/// significant bit of the amplitude index).
class MultiQubitState {
public:
    explicit MultiQubitState(int n) : n_(check_count(n)), amps_(std::size_t{1} << n_) {
        amps_[0] = 1.0;
    }

    int num_qubits() const { return n_; }
    std::size_t dimension() const { return amps_.size(); }
    const std::vector<cxd>& amplitudes() const { return amps_; }
    std::vector<cxd>& amplitudes() { return amps_; }

    double norm_squared() const {
        double s = 0.0;
        for (const cxd& a : amps_) s += std::norm(a);
        return s;
    }

private:
    static int check_count(int n) {
        if (n < 1 || n > kMaxCircuitQubits) {
            throw std::length_error("register size must be between 1 and " +
                                    std::to_string(kMaxCircuitQubits) + " qubits");
        }
        return n;
    }

    int n_;
    std::vector<cxd> amps_;
};

/// Tensor product of independently generated qubits; states[0] becomes
/// qubit 0.
inline MultiQubitState product_state(std::span<const SpinState> states) {
    MultiQubitState reg(static_cast<int>(states.size()));
    auto& amps = reg.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        cxd a{1.0, 0.0};
        for (std::size_t q = 0; q < states.size(); ++q) {
            a *= (idx >> q) & 1u ? states[q].beta : states[q].alpha;
        }
        amps[idx] = a;
    }
    return reg;
}

struct GateOp {
    enum class Kind { X, Y, Z, H, RX, RY, RZ, CNOT };

    Kind kind{Kind::X};
    int target{0};
    int control{-1};    // CNOT only
    double angle{0.0};  // RX/RY/RZ only

    static GateOp x(int t) { return {Kind::X, t}; }
    static GateOp y(int t) { return {Kind::Y, t}; }
    static GateOp z(int t) { return {Kind::Z, t}; }
    static GateOp h(int t) { return {Kind::H, t}; }
    static GateOp rx(int t, double a) { return {Kind::RX, t, -1, a}; }
    static GateOp ry(int t, double a) { return {Kind::RY, t, -1, a}; }
    static GateOp rz(int t, double a) { return {Kind::RZ, t, -1, a}; }
    static GateOp cnot(int control, int target) { return {Kind::CNOT, target, control}; }
};

inline const char* gate_name(GateOp::Kind k) {
    switch (k) {
    case GateOp::Kind::X: return "x";
    case GateOp::Kind::Y: return "y";
    case GateOp::Kind::Z: return "z";
    case GateOp::Kind::H: return "h";
    case GateOp::Kind::RX: return "rx";
    case GateOp::Kind::RY: return "ry";
    case GateOp::Kind::RZ: return "rz";
    case GateOp::Kind::CNOT: return "cnot";
    }
    return "?";
}

namespace detail {

inline std::array<cxd, 4> gate_matrix(const GateOp& op) {
    const double c = std::cos(0.5 * op.angle);
    const double s = std::sin(0.5 * op.angle);
    constexpr double inv_sqrt2 = 0.7071067811865476;
    switch (op.kind) {
    case GateOp::Kind::X: return {cxd(0), cxd(1), cxd(1), cxd(0)};
    case GateOp::Kind::Y: return {cxd(0), cxd(0, -1), cxd(0, 1), cxd(0)};
    case GateOp::Kind::Z: return {cxd(1), cxd(0), cxd(0), cxd(-1)};
    case GateOp::Kind::H:
        return {cxd(inv_sqrt2), cxd(inv_sqrt2), cxd(inv_sqrt2), cxd(-inv_sqrt2)};
    case GateOp::Kind::RX: return {cxd(c), cxd(0, -s), cxd(0, -s), cxd(c)};
    case GateOp::Kind::RY: return {cxd(c), cxd(-s), cxd(s), cxd(c)};
    case GateOp::Kind::RZ: return {cxd(c, -s), cxd(0), cxd(0), cxd(c, s)};
    case GateOp::Kind::CNOT: break;
    }
    throw std::domain_error("gate_matrix: not a single-qubit gate");
}

}  // namespace detail

/// Unitary action of `op` on the targeted qubits.
inline MultiQubitState apply_gate(const MultiQubitState& state, const GateOp& op) {
    const int n = state.num_qubits();
    auto in_range = [n](int q) { return q >= 0 && q < n; };

    MultiQubitState out = state;
    auto& amps = out.amplitudes();

    if (op.kind == GateOp::Kind::CNOT) {
        if (!in_range(op.target) || !in_range(op.control) || op.target == op.control) {
            throw std::domain_error("apply_gate: cnot needs distinct in-range control/target");
        }
        const std::size_t cmask = std::size_t{1} << op.control;
        const std::size_t tmask = std::size_t{1} << op.target;
        for (std::size_t idx = 0; idx < amps.size(); ++idx) {
            if ((idx & cmask) && !(idx & tmask)) {
                std::swap(amps[idx], amps[idx | tmask]);
            }
        }
        return out;
    }

    if (!in_range(op.target)) throw std::domain_error("apply_gate: target out of range");
    if ((op.kind == GateOp::Kind::RX || op.kind == GateOp::Kind::RY ||
         op.kind == GateOp::Kind::RZ) &&
        !std::isfinite(op.angle)) {
        throw std::domain_error("apply_gate: rotation angle must be finite");
    }

    const auto u = detail::gate_matrix(op);
    const std::size_t tmask = std::size_t{1} << op.target;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (idx & tmask) continue;
        const cxd a0 = amps[idx];
        const cxd a1 = amps[idx | tmask];
        amps[idx] = u[0] * a0 + u[1] * a1;
        amps[idx | tmask] = u[2] * a0 + u[3] * a1;
    }
    return out;
}

/// Bitstring label, most significant qubit first.
inline std::string basis_label(std::size_t idx, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q) {
        if ((idx >> q) & 1u) s[static_cast<std::size_t>(n - 1 - q)] = '1';
    }
    return s;
}

/// Exact outcome probabilities for every basis state.
inline std::map<std::string, double> measure_probabilities(const MultiQubitState& state) {
    std::map<std::string, double> probs;
    const auto& amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        probs[basis_label(idx, state.num_qubits())] = std::norm(amps[idx]);
    }
    return probs;
}

}  // namespace mrq
