// Generates two MR-qubits at beta = 1/sqrt(2) and entangles them.

#include <cstdio>

#include "mrq/mrq.hpp"

int main() {
    mrq::PhysicsConfig cfg;
    cfg.gamma = mrq::to_angular(42.577e6);  // proton, rad/s/T
    cfg.b0 = 3.0;
    cfg.gz = 0.01;
    cfg.t1 = 4.0;
    cfg.t2 = 2.0;

    const auto sites = mrq::assign_sites(2, 0.001, cfg);
    const auto coils = mrq::default_coils(sites, mrq::to_angular(200.0));

    const double amp = 0.70710678118654752;
    const std::vector<mrq::GenerationRequest> requests{
        {1, std::make_pair(amp, amp), std::nullopt},
        {2, std::make_pair(amp, amp), std::nullopt}};

    const auto result = mrq::generate_qubits(requests, sites, coils, cfg, 0.02, 20.0);
    for (const auto& q : result.qubits) {
        std::printf("site %d: gate at echo %d (t = %.3f s), alpha = %.6f, beta = %.6f\n",
                    q.site_id, q.gate.echo_index, q.gate.gate_time, q.state.alpha.real(),
                    q.state.beta.real());
    }

    auto reg = mrq::MultiQubitState(2);
    reg = mrq::apply_gate(reg, mrq::GateOp::h(1));
    reg = mrq::apply_gate(reg, mrq::GateOp::cnot(1, 0));
    std::printf("Bell circuit on |00>:\n");
    for (const auto& [label, p] : mrq::measure_probabilities(reg)) {
        std::printf("  P(%s) = %.4f\n", label.c_str(), p);
    }
    return 0;
}
