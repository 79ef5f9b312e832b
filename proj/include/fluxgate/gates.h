#pragma once

#include <optional>
#include <vector>

#include "fluxgate/dynamics.h"
#include "fluxgate/metrics.h"
#include "fluxgate/pulses.h"

namespace fluxgate {

struct GateOptions {
    PropagationOptions propagation;
    unsigned threads = 1;
    std::optional<Matrix> target;  // overrides the protocol's default target
    bool refine_x_angle = true;     // simple CR pulse only
    double x_window = 0.2;          // relative half-width of the X-angle search
};

struct GateCorrections {
    VirtualZ z;
    double x_angle_estimate = 0.0;  // 2 mu_Xt * envelope integral
    double x_angle = 0.0;           // angle whose inverse was applied
};

struct GateResult {
    double f_gate = 0.0;
    double f_ent = 0.0;
    double leakage_l1 = 0.0;
    double t_total_ns = 0.0;
    GateCorrections corrections;
    bool noisy = false;
    // E11 - E10 - E01 + E00 style phase of the uncorrected gate; NaN when the
    // gate is not close to diagonal.
    double conditional_phase = 0.0;
    ComputationalChannel channel;  // realized, in the computational rotating frame, uncorrected
    Matrix block;                  // noiseless only: 4x4 computational block, uncorrected
};

GateResult run_cr_gate(const CoupledSystem& s, const PulseSpec& spec, const std::optional<NoiseModel>& noise,
                       const GateOptions& opt = {});
GateResult run_cr_gate(const CoupledSystem& s, const EchoSpec& spec, const std::optional<NoiseModel>& noise,
                       const GateOptions& opt = {});
GateResult run_cphase_gate(const CoupledSystem& s, const CPhaseDriveSolution& sol,
                           const std::optional<NoiseModel>& noise, const GateOptions& opt = {});

// Pulse length within +-window_ns of the solved one maximizing the noiseless
// gate fidelity.
CPhaseDriveSolution refine_cphase_pulse_length(const CoupledSystem& s, const CPhaseDriveSolution& sol,
                                               double window_ns = 3.0, const GateOptions& opt = {});

struct LeakageScanRow {
    double target_phi = 0.0;
    double t_pulse_ns = 0.0;
    double envelope_integral_ns = 0.0;
    double leakage_l1 = 0.0;
    double f_gate = 0.0;
};

struct LeakageScan {
    std::vector<LeakageScanRow> rows;
    std::vector<LeakageScanRow> minima;  // one per target phase
};

// CPHASE leakage against pulse length; t_offsets_ns are added to the solved
// pulse length of each target phase.
LeakageScan leakage_vs_gatetime_scan(const CoupledSystem& s, const std::vector<double>& phi_targets,
                                     const std::vector<double>& t_offsets_ns,
                                     const std::optional<NoiseModel>& noise = std::nullopt,
                                     const GateOptions& opt = {});

struct CrScanRow {
    double omega_t_ghz = 0.0;
    double t_gate_ns = 0.0;  // NaN when calibration failed
    double leakage_l1 = 0.0;
    double f_gate = 0.0;
};

// Echo CR gates against transmon frequency at fixed drive amplitude.
std::vector<CrScanRow> cr_leakage_scan(const CoupledSystem& s, const std::vector<double>& omega_t_ghz,
                                       double eps_d_mhz, double t_rise_ns,
                                       const std::optional<NoiseModel>& noise = std::nullopt,
                                       const GateOptions& opt = {});

} // namespace fluxgate
