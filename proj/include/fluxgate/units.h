#pragma once

// Internal convention: hbar = 1, energies are angular frequencies in rad/ns,
// times in ns. Configuration and reports use ordinary frequencies (GHz, MHz,
// kHz), so the 2*pi factor appears only in the conversions below.

#include <numbers>

namespace fluxgate {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double ghz_to_rad(double ghz) { return two_pi * ghz; }
inline constexpr double mhz_to_rad(double mhz) { return two_pi * mhz * 1e-3; }
inline constexpr double rad_to_ghz(double w) { return w / two_pi; }
inline constexpr double rad_to_mhz(double w) { return w / two_pi * 1e3; }
inline constexpr double rad_to_khz(double w) { return w / two_pi * 1e6; }

// Angular frequency with explicit unit accessors, returned by analysis
// routines so callers cannot mix up GHz and rad/ns.
class Frequency {
public:
    constexpr Frequency() = default;
    static constexpr Frequency from_rad(double w) { return Frequency(w); }
    static constexpr Frequency from_ghz(double f) { return Frequency(ghz_to_rad(f)); }
    static constexpr Frequency from_mhz(double f) { return Frequency(mhz_to_rad(f)); }

    constexpr double rad_per_ns() const { return w_; }
    constexpr double ghz() const { return rad_to_ghz(w_); }
    constexpr double mhz() const { return rad_to_mhz(w_); }
    constexpr double khz() const { return rad_to_khz(w_); }

    constexpr Frequency operator-() const { return Frequency(-w_); }
    constexpr Frequency operator+(Frequency o) const { return Frequency(w_ + o.w_); }
    constexpr Frequency operator-(Frequency o) const { return Frequency(w_ - o.w_); }
    constexpr Frequency operator*(double s) const { return Frequency(w_ * s); }

private:
    constexpr explicit Frequency(double w) : w_(w) {}
    double w_ = 0.0;
};

namespace si {
inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = h / two_pi;
inline constexpr double kB = 1.380649e-23;
} // namespace si

// Bose-Einstein occupation at angular frequency w (rad/ns), temperature in mK.
double thermal_occupation(double w_rad_per_ns, double temperature_mk);

} // namespace fluxgate
