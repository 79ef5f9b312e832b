#pragma once

#include <vector>

#include "fluxgate/coupled.h"

namespace fluxgate {

// Unitary U = sqrt((I - 2 P0)(I - 2 P)) with U^dag P0 U = P. Throws when
// ||P - P0|| >= 1 (no such transformation).
Matrix sw_exact_unitary(const Matrix& p0, const Matrix& p);

struct ExactSW {
    Matrix unitary;
    Matrix h_eff;              // P0 U H U^dag P0, full dimension
    Matrix block;              // the same restricted to the listed bare states
    std::vector<Index> bare;   // bare indices of the block, in order
};

ExactSW sw_exact(const Matrix& h, const std::vector<Index>& p0_states, const Matrix& p);

// Exact transformation of the full coupled Hamiltonian onto the computational
// labels |00>, |01>, |10>, |11> (spectator, if any, in |0>).
ExactSW sw_exact(const CoupledSystem& s);

// P0 U A U^dag P0 restricted to the computational block, for any operator A.
Matrix sw_transform_block(const ExactSW& sw, const Matrix& a);

// Three transmon and four fluxonium levels with the rotating-wave coupling
// (only |k-1, l'><k, l| with l' > l, and h.c.). Bare ordering t * 4 + f.
Operator sw_model_hamiltonian(const CoupledSystem& s);

struct SWResult {
    Operator s1;       // 12 x 12 on the model space above
    Operator h_eff2;   // 4 x 4 on |00>, |01>, |10>, |11>, rad/ns
    Frequency zeta_10;
    Frequency zeta_11;
    Frequency xi_zz_sw;
    Frequency mu_cr;   // normalized nonnegative
    Frequency mu_xt;   // with the same drive phase as mu_cr
    Frequency mu_xf;
    double theta_d = pi / 2;
};

// Second-order closed form. Throws PhysicsError when a denominator is within
// 1 MHz of resonance.
SWResult sw_effective_hamiltonian_2nd(const CoupledSystem& s, double eps_d_mhz = 0.0);

struct CrCoefficient {
    Frequency mu_cr;   // >= 0
    Frequency mu_xt;   // sign consistent with theta_d
    double theta_d = pi / 2;
};

// Closed-form second-order cross-resonance rate.
CrCoefficient cr_coefficient_tf(const CoupledSystem& s, double eps_d_mhz);

// Rates from the exact SW image of the drive operator: with
// m_l = Im <1l|P0 U q_f U^dag P0|0l>, mu_CR = eps (m0 - m1)/4 and
// mu_Xt = eps (m0 + m1)/4 for theta_d = pi/2.
CrCoefficient cr_coefficient_exact(const CoupledSystem& s, double eps_d_mhz);

// Transmon-transmon cross resonance (control driven), signed.
Frequency cr_coefficient_tt(const TransmonParams& control, const TransmonParams& target, double jc_mhz,
                            double eps_d_mhz);

struct DriveCoefficients {
    Frequency mu_xf;
    Frequency mu_xt;
};
DriveCoefficients drive_effective_coefficients(const CoupledSystem& s, double eps_d_mhz);

// pi / (4 mu_CR) in ns.
double ideal_gate_time_ns(Frequency mu_cr);

} // namespace fluxgate
