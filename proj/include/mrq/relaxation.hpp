#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mrq/evolution.hpp"
#include "mrq/spin.hpp"

namespace mrq {

/// Spin-density signal rho0 * exp(-t/T2) * (1 - exp(-t/T1)).
inline double signal_equation(double rho0, double t, double t1, double t2) {
    if (t < 0.0) throw std::domain_error("signal_equation: negative t");
    if (!(t1 > 0.0) || !(t2 > 0.0)) {
        throw std::domain_error("signal_equation: relaxation times must be positive");
    }
    return rho0 * std::exp(-t / t2) * (1.0 - std::exp(-t / t1));
}

/// Per-component relaxation over `duration`: transverse decay with T2,
/// longitudinal recovery toward equilibrium mz = 1 with T1. Exact operator,
/// no time stepping.
inline BlochVector relax(const BlochVector& m, double duration, const PhysicsConfig& cfg) {
    if (duration < 0.0) throw std::domain_error("relax: negative duration");
    if (duration == 0.0) return m;
    const double e2 = std::exp(-duration / cfg.t2);
    const double e1 = std::exp(-duration / cfg.t1);
    return {m.mx * e2, m.my * e2, 1.0 + (m.mz - 1.0) * e1};
}

/// 90(excitation) - [180(refocus) - echo]^n with echo spacing te.
/// Refocusing pulses sit at te/2 + k*te; echoes are sampled at i*te.
struct CpmgSequence {
    double te{0.0};                 // s
    int n_echoes{0};
    Axis excitation_axis{Axis::X};
    Axis refocus_axis{Axis::Y};
    double off_resonance{0.0};      // rad/s

    void validate() const {
        if (!(te > 0.0)) throw std::invalid_argument("cpmg: te must be positive");
        if (n_echoes < 1) throw std::invalid_argument("cpmg: n_echoes must be >= 1");
    }
};

struct EchoSample {
    int echo_index{0};
    double time{0.0};       // s
    double amplitude{0.0};  // transverse magnitude, [0, 1]
};

struct EchoTrain {
    std::vector<EchoSample> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

/// Event-driven CPMG run: exact rotation and relaxation operators between
/// hard pulses, no ODE stepping. Off-resonance precession and transverse
/// decay commute, so each half-interval is a single composite operator.
inline EchoTrain simulate_cpmg(const CpmgSequence& seq, const PhysicsConfig& cfg) {
    seq.validate();
    const double half = 0.5 * seq.te;
    const double half_pi = 1.5707963267948966;

    auto drift = [&](const BlochVector& m) {
        return relax(rotate(m, Axis::Z, seq.off_resonance * half), half, cfg);
    };

    BlochVector m{0.0, 0.0, 1.0};
    m = rotate(m, seq.excitation_axis, half_pi);

    EchoTrain train;
    train.entries.reserve(static_cast<std::size_t>(seq.n_echoes));
    for (int i = 1; i <= seq.n_echoes; ++i) {
        m = drift(m);
        m = rotate(m, seq.refocus_axis, 2.0 * half_pi);
        m = drift(m);
        train.entries.push_back({i, i * seq.te, m.transverse()});
    }
    return train;
}

/// Usable computation window, factor * T1 (factor defaults to 5).
inline double computation_window(double t1, double factor = 5.0) {
    if (!(t1 > 0.0)) throw std::domain_error("computation_window: t1 must be positive");
    return factor * t1;
}

/// floor(window / te), tolerant of the division landing a few ulps under an
/// integer boundary.
inline int echo_count(double window, double te) {
    if (!(window > 0.0) || !(te > 0.0)) {
        throw std::domain_error("echo_count: window and te must be positive");
    }
    return static_cast<int>(std::floor(window / te + 1e-9));
}

}  // namespace mrq
