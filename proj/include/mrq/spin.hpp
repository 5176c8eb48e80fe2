#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace mrq {

using cxd = std::complex<double>;

/// Rotation generator axes (sigma_x, sigma_y, sigma_z).
enum class Axis { X, Y, Z };

inline const char* axis_name(Axis a) {
    switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    }
    return "?";
}

/// Two-level state alpha|0> + beta|1>. Global phase carries no meaning;
/// comparisons go through Bloch vectors or amplitude magnitudes.
struct SpinState {
    cxd alpha{1.0, 0.0};
    cxd beta{0.0, 0.0};

    static SpinState ground() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static SpinState excited() { return {{0.0, 0.0}, {1.0, 0.0}}; }

    double norm_squared() const { return std::norm(alpha) + std::norm(beta); }
};

/// Magnetization (Mx, My, Mz) in units of the equilibrium value M0 = 1.
struct BlochVector {
    double mx{0.0};
    double my{0.0};
    double mz{1.0};

    double norm() const { return std::sqrt(mx * mx + my * my + mz * mz); }
    double transverse() const { return std::hypot(mx, my); }
};

/// exp(-i*angle*sigma_axis/2). Zero angle is an exact identity.
inline SpinState rotate(const SpinState& s, Axis axis, double angle) {
    if (!std::isfinite(angle)) {
        throw std::domain_error("rotate: angle must be finite");
    }
    const double c = std::cos(0.5 * angle);
    const double sn = std::sin(0.5 * angle);
    switch (axis) {
    case Axis::X:
        return {c * s.alpha - cxd(0.0, sn) * s.beta,
                c * s.beta - cxd(0.0, sn) * s.alpha};
    case Axis::Y:
        return {c * s.alpha - sn * s.beta,
                sn * s.alpha + c * s.beta};
    case Axis::Z:
        return {cxd(c, -sn) * s.alpha,
                cxd(c, sn) * s.beta};
    }
    throw std::domain_error("rotate: bad axis");
}

/// Same rotation applied to a Bloch vector (right-handed, matching the
/// amplitude-level convention above).
inline BlochVector rotate(const BlochVector& m, Axis axis, double angle) {
    if (!std::isfinite(angle)) {
        throw std::domain_error("rotate: angle must be finite");
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    switch (axis) {
    case Axis::X:
        return {m.mx, c * m.my - s * m.mz, s * m.my + c * m.mz};
    case Axis::Y:
        return {c * m.mx + s * m.mz, m.my, c * m.mz - s * m.mx};
    case Axis::Z:
        return {c * m.mx - s * m.my, s * m.mx + c * m.my, m.mz};
    }
    throw std::domain_error("rotate: bad axis");
}

inline BlochVector to_bloch(const SpinState& s) {
    const cxd cross = std::conj(s.alpha) * s.beta;
    return {2.0 * cross.real(), 2.0 * cross.imag(),
            std::norm(s.alpha) - std::norm(s.beta)};
}

/// (|alpha|, |beta|).
inline std::pair<double, double> probability_amplitudes(const SpinState& s) {
    return {std::abs(s.alpha), std::abs(s.beta)};
}

}  // namespace mrq
