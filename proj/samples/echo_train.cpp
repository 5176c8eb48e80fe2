// Prints a short CPMG train and the gate time the conversion table picks
// for a target amplitude.

#include <cstdio>

#include "mrq/mrq.hpp"

int main() {
    mrq::PhysicsConfig cfg;
    cfg.gamma = mrq::to_angular(42.577e6);
    cfg.b0 = 3.0;
    cfg.t1 = 4.0;
    cfg.t2 = 2.0;

    const mrq::CpmgSequence seq{0.02, 10, mrq::Axis::X, mrq::Axis::Y, 0.0};
    for (const auto& e : mrq::simulate_cpmg(seq, cfg).entries) {
        std::printf("echo %2d  t = %.2f s  amplitude = %.6f\n", e.echo_index, e.time,
                    e.amplitude);
    }

    const auto table = mrq::build_tepa_table(cfg, 0.02, mrq::computation_window(cfg.t1),
                                             mrq::TepaModel::T1Decay);
    const auto pick = mrq::lookup_gate_time(table, 0.70710678118654752);
    std::printf("beta 1/sqrt(2) -> echo %d at t = %.2f s (|dbeta^2| = %.2e)\n",
                pick.echo_index, pick.time, pick.error);
    return 0;
}
