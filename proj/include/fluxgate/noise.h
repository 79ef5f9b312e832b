#pragma once

#include <functional>
#include <vector>

#include "fluxgate/device.h"

namespace fluxgate {

struct NoiseModel {
    double transmon_tan_delta = 3e-7;
    double fluxonium_tan_delta_ref = 3.5e-6;
    double fluxonium_tan_delta_exponent = 0.15;
    double omega_ref_ghz = 6.0;
    double temperature_mk = 20.0;

    void validate() const;
    double fluxonium_tan_delta(double omega_ghz) const;
};

enum class JumpKind { down, up };

// One relaxation or excitation channel between levels upper > lower of a
// single device. op is |lower><upper| (down) or |upper><lower| (up); the rate
// multiplies it as sqrt(rate) in the master equation.
struct Jump {
    RealMatrix op;
    double rate_per_us = 0.0;
    JumpKind kind = JumpKind::down;
    int upper = 0;
    int lower = 0;
};

struct JumpOperatorSet {
    int dim = 0;
    std::vector<Jump> jumps;

    double rate_per_us(JumpKind kind, int upper, int lower) const;
    double t1_us(int upper, int lower) const;  // 1 / gamma_down
};

// gamma_kl = omega_kl^2 |<k|phi|l>|^2 tan_delta(omega_kl) / (4 E_C), i.e. a
// shunt admittance Re Y = omega C tan_delta with C = e^2 / (2 E_C).
// Thermal factors: down (1 + n), up n, n = 1 / (exp(h f / k T) - 1).
JumpOperatorSet dielectric_jump_operators(const RealVector& energies_ghz, const RealMatrix& phi_elements,
                                          const std::function<double(double)>& tan_delta_of_ghz, double ec_ghz,
                                          double temperature_mk);
JumpOperatorSet dielectric_jump_operators(const FluxoniumSpectrum& f, const NoiseModel& noise);
JumpOperatorSet dielectric_jump_operators(const TransmonParams& t, const NoiseModel& noise);

} // namespace fluxgate
