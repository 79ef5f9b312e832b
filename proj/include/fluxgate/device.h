#pragma once

#include "fluxgate/linalg.h"
#include "fluxgate/units.h"

namespace fluxgate {

// Duffing transmon. Frequencies are ordinary (E/h) in GHz.
struct TransmonParams {
    double omega_ghz = 5.0;
    double delta_ghz = -0.3;
    int n_levels = 3;

    void validate() const;
    double ej_ghz() const;  // (omega - delta)^2 / (8 |delta|)
    double ec_ghz() const;  // |delta|
    double q_zpf() const;   // (E_J / (32 |delta|))^(1/4)
    double phi_zpf() const; // 1 / (2 q_zpf)
};

struct FluxoniumParams {
    double ec_ghz = 1.0;
    double el_ghz = 1.0;
    double ej_ghz = 4.0;
    double phi_ext = pi;
    int basis_dim = 120;
    int n_levels = 6;

    void validate() const;
    double phi_zpf() const; // (2 E_C / E_L)^(1/4)
    double q_zpf() const;   // 1 / (2 phi_zpf)
};

// The two fluxonium parameter sets of the device study ("CR" and "CPHASE").
FluxoniumParams fluxonium_cr_set();
FluxoniumParams fluxonium_cphase_set();

struct FluxoniumSpectrum {
    FluxoniumParams params;
    RealVector energies_ghz;  // ground referenced, ascending
    RealMatrix q_elements;    // q(k,l) = -i <k|q|l>, real and antisymmetric in this gauge
    RealMatrix phi_elements;  // <k|phi|l>
    RealMatrix eigenvectors;  // oscillator basis, columns

    int n_levels() const { return static_cast<int>(energies_ghz.size()); }
    // Operators in the fluxonium eigenbasis (Basis::generic), rad/ns for H.
    Operator hamiltonian() const;
    Operator charge_operator() const;
    Operator flux_operator() const;
};

Operator transmon_hamiltonian(const TransmonParams& p);
Operator transmon_charge_operator(const TransmonParams& p);
Operator transmon_flux_operator(const TransmonParams& p);

struct OscillatorOperators {
    RealMatrix phi;
    RealMatrix q_over_i;  // q = i * q_over_i
};
OscillatorOperators fluxonium_oscillator_operators(const FluxoniumParams& p);

// Real symmetric matrix of cos(phi - phi_ext) from the eigendecomposition of phi.
RealMatrix fluxonium_cosine(const RealMatrix& phi, double phi_ext);

Operator fluxonium_hamiltonian(const FluxoniumParams& p);

// Lowest n_levels energies (GHz, ground referenced) without eigenvectors.
RealVector fluxonium_energies_ghz(const FluxoniumParams& p);

enum class ConvergenceCheck { enabled, skipped };

// Diagonalizes and keeps the lowest n_levels states. With the check enabled
// the result is compared against basis_dim + 20 and a PhysicsError naming a
// larger basis is thrown if any energy moves by >= 1 kHz or any |q| element
// by >= 1e-5 relative.
FluxoniumSpectrum fluxonium_eigensystem(const FluxoniumParams& p,
                                        ConvergenceCheck check = ConvergenceCheck::enabled);

// energies[l] - energies[k]; throws std::out_of_range for bad levels.
Frequency transition_frequency(const FluxoniumSpectrum& s, int k, int l);

} // namespace fluxgate
