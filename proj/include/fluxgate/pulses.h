#pragma once

#include <array>

#include "fluxgate/coupled.h"

namespace fluxgate {

enum class Envelope { piecewise_gaussian, constant };

struct PulseSpec {
    double eps_d_mhz = 0.0;
    double omega_d_ghz = 0.0;
    double theta_d = pi / 2;
    double t_rise_ns = 10.0;
    double t_pulse_ns = 0.0;
    Envelope envelope = Envelope::piecewise_gaussian;

    void validate() const;
    double sigma_ns() const;                 // t_rise / sqrt(2 pi)
    std::array<double, 4> breakpoints() const;  // 0, t_rise, t_pulse - t_rise, t_pulse
    bool operator==(const PulseSpec&) const = default;
};

struct EchoSpec {
    PulseSpec half_pulse;
    bool ideal_pi_rotation = true;

    PulseSpec first_half() const { return half_pulse; }
    PulseSpec second_half() const;  // same pulse with eps_d -> -eps_d
    double total_time_ns() const { return 2.0 * half_pulse.t_pulse_ns; }
    bool operator==(const EchoSpec&) const = default;
};

struct CPhaseDriveSolution {
    double omega_d_ghz = 0.0;
    double eps_d_mhz = 0.0;
    double rabi_mhz = 0.0;          // matched generalized Rabi frequency Omega / 2pi
    double target_phi = pi;
    double t_pulse_ns = 0.0;
    double t_rise_ns = 10.0;
    double delta_mhz = 0.0;         // Delta / 2pi used in the solution
    double q0 = 0.0;                // |<00|q_f|03>|
    double q1 = 0.0;                // |<10|q_f|13>|

    PulseSpec pulse(double theta_d = pi / 2) const;
};

// Flat-top envelope with Gaussian edges; 1 for the constant
// envelope inside [0, t_pulse]; 0 outside.
double gaussian_envelope(double t_ns, const PulseSpec& spec);
double envelope(double t_ns, const PulseSpec& spec);

// Closed-form integral of one Gaussian edge.
double rise_integral_ns(double t_rise_ns);
// Integral of the envelope over [0, t_pulse].
double envelope_integral_ns(const PulseSpec& spec);
// Pulse length whose envelope integral equals target_ns.
double pulse_length_for_integral(double target_ns, double t_rise_ns, Envelope envelope);

// g(t) eps cos(omega_d t + theta) times the drive operator (I (x) q_f in the
// bare basis, or its dressed image when dressed is true).
Operator drive_hamiltonian(const CoupledSystem& s, const PulseSpec& spec, double t_ns, bool dressed = false);

struct CalibrationOptions {
    double t_pulse_cap_ns = 2000.0;
    bool closed_form_rate = false;  // use the closed-form SW rate instead of the exact one
};

PulseSpec calibrate_cr_pulse(const CoupledSystem& s, double eps_d_mhz, double t_rise_ns,
                             const CalibrationOptions& opt = {});
EchoSpec calibrate_cr_echo(const CoupledSystem& s, double eps_d_mhz, double t_rise_ns,
                           const CalibrationOptions& opt = {});

// Drive frequency and amplitude giving equal generalized Rabi frequencies
// Omega = pi Delta / phi on |00>-|03> and |10>-|13>.
CPhaseDriveSolution solve_cphase_drive(const CoupledSystem& s, double target_phi, double t_rise_ns);

// The two generalized Rabi frequencies (rad/ns) for a given drive.
std::array<double, 2> cphase_rabi_frequencies(const CPhaseDriveSolution& sol, double omega13_minus_10,
                                             double omega03_minus_00);

} // namespace fluxgate
