#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrq/spin.hpp"

namespace mrq {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double to_hz(double angular) { return angular / kTwoPi; }
inline double to_angular(double hz) { return hz * kTwoPi; }
inline double to_degrees(double rad) { return rad * (360.0 / kTwoPi); }

/// Static-field and sample parameters. gamma is angular (rad s^-1 T^-1);
/// t1/t2 may be +inf to disable relaxation.
struct PhysicsConfig {
    double gamma{0.0};  // rad s^-1 T^-1
    double b0{0.0};     // T
    double gz{0.0};     // T m^-1
    double t1{0.0};     // s
    double t2{0.0};     // s
    double rho0{1.0};

    /// Throws std::invalid_argument on hard violations; returns warnings
    /// (t2 > t1 is flagged but allowed).
    std::vector<std::string> validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("physics: gamma must be positive");
        if (!(b0 > 0.0)) throw std::invalid_argument("physics: b0 must be positive");
        if (!(t1 > 0.0)) throw std::invalid_argument("physics: t1 must be positive");
        if (!(t2 > 0.0)) throw std::invalid_argument("physics: t2 must be positive");
        if (gz < 0.0) throw std::invalid_argument("physics: gz must be non-negative");
        if (!(rho0 > 0.0)) throw std::invalid_argument("physics: rho0 must be positive");
        std::vector<std::string> warnings;
        if (t2 > t1) {
            warnings.push_back("physics: t2 > t1 (spin-spin decay is normally the faster one)");
        }
        return warnings;
    }
};

/// omega(z) = gamma * (B0 + Gz * z), in rad/s.
inline double larmor_frequency(const PhysicsConfig& cfg, double z) {
    return cfg.gamma * (cfg.b0 + cfg.gz * z);
}

struct CoilRef {
    enum class Kind { Main, QCoil };
    Kind kind{Kind::Main};
    int site_id{-1};  // meaningful for QCoil only

    static CoilRef main() { return {Kind::Main, -1}; }
    static CoilRef qcoil(int site_id) { return {Kind::QCoil, site_id}; }
};

/// One hard RF pulse. B1 amplitude and duration are folded into flip_angle.
struct PulseEvent {
    double start_time{0.0};   // s
    double flip_angle{0.0};   // rad, (0, 2*pi]
    Axis axis{Axis::X};
    double carrier{0.0};      // rad/s
    CoilRef coil{};

    void validate() const {
        if (!(start_time >= 0.0)) throw std::invalid_argument("pulse: start_time must be >= 0");
        if (!(flip_angle > 0.0 && flip_angle <= kTwoPi)) {
            throw std::invalid_argument("pulse: flip_angle must be in (0, 2*pi]");
        }
    }
};

/// A spin state pinned to its site's center frequency (rad/s).
struct SitedState {
    SpinState state;
    double frequency{0.0};
};

inline bool in_band(double frequency, double center, double bandwidth) {
    return std::abs(frequency - center) <= 0.5 * bandwidth;
}

/// Free precession in the rotating frame: z-rotation by omega*duration.
inline SpinState free_evolve(const SpinState& s, double duration, double omega) {
    if (duration < 0.0) throw std::domain_error("free_evolve: negative duration");
    return rotate(s, Axis::Z, omega * duration);
}

/// Broadband main-coil pulse: x-rotation for every site inside the top-hat
/// band, all others passed through untouched.
inline std::vector<SpinState> apply_main_rf(std::span<const SitedState> states,
                                            double coil_bandwidth, double coil_center,
                                            double flip_angle) {
    std::vector<SpinState> out;
    out.reserve(states.size());
    for (const auto& [state, frequency] : states) {
        out.push_back(in_band(frequency, coil_center, coil_bandwidth)
                          ? rotate(state, Axis::X, flip_angle)
                          : state);
    }
    return out;
}

/// Frequency-selective Q-coil pulse. Out-of-band sites are returned
/// bit-identical to the input.
inline std::vector<SpinState> apply_qcoil_rf(std::span<const SitedState> states,
                                             const PulseEvent& pulse,
                                             double qcoil_bandwidth) {
    std::vector<SpinState> out;
    out.reserve(states.size());
    for (const auto& [state, frequency] : states) {
        out.push_back(in_band(frequency, pulse.carrier, qcoil_bandwidth)
                          ? rotate(state, pulse.axis, pulse.flip_angle)
                          : state);
    }
    return out;
}

inline double infinite_time() { return std::numeric_limits<double>::infinity(); }

}  // namespace mrq
