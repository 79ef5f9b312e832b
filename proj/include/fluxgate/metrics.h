#pragma once

#include <array>
#include <vector>

#include "fluxgate/linalg.h"
#include "fluxgate/units.h"

namespace fluxgate {

// Two-qubit index convention: (transmon, fluxonium) -> 2 * t + f.

// Linear map on 4x4 operators as a 16x16 matrix acting on column-major vec(X).
// It need not be trace preserving: leakage shows up as lost trace.
class ComputationalChannel {
public:
    ComputationalChannel() : s_(Matrix::Identity(16, 16)) {}
    explicit ComputationalChannel(Matrix superop);

    // X -> M X M^dag.
    static ComputationalChannel from_unitary(const Matrix& m);
    // Solves S vec(in_j) = vec(out_j) for 16 linearly independent inputs.
    static ComputationalChannel from_io(const std::vector<Matrix>& inputs, const std::vector<Matrix>& outputs);

    const Matrix& superop() const { return s_; }
    Matrix apply(const Matrix& x) const;
    // this followed by post, i.e. post o this.
    ComputationalChannel then(const ComputationalChannel& post) const { return ComputationalChannel(post.s_ * s_); }
    ComputationalChannel then(const Matrix& unitary) const { return then(from_unitary(unitary)); }
    ComputationalChannel after(const Matrix& unitary) const { return ComputationalChannel(s_ * from_unitary(unitary).s_); }

private:
    Matrix s_;
};

// 1 - Tr[P_c E(P_c)] / 4.
double leakage_l1(const ComputationalChannel& e);
// (1/16) sum_mu Tr(U P_mu U^dag E(P_mu)) over normalized two-qubit Paulis.
double entanglement_fidelity(const ComputationalChannel& e, const Matrix& target);
// (4 F_ent + 1 - L1) / 5.
double gate_fidelity(double f_ent, double l1);

struct ChannelMetrics {
    double f_gate = 0.0;
    double f_ent = 0.0;
    double leakage_l1 = 0.0;
};
ChannelMetrics evaluate(const ComputationalChannel& e, const Matrix& target);

// Products of single-qubit |0>, |1>, |+>, |+i>; index 4 * a_t + a_f.
std::vector<Matrix> pauli_eigenstate_inputs();
// sigma_a (x) sigma_b / 2, a, b in {I, X, Y, Z}; index 4 * a + b.
std::vector<Matrix> normalized_paulis();

Matrix cr_target();                    // exp(-i pi/4 X_t Z_f)
Matrix cphase_target(double phi);      // diag(1, 1, 1, e^{i phi})
Matrix z_phases(double a_t, double a_f);       // exp(-i a |1><1|) on each qubit
Matrix x_rotation_transmon(double theta);      // exp(-i theta/2 X_t)

struct VirtualZ {
    // Phases a applied as z_phases(a_t, a_f) before and after the gate.
    double pre_t = 0.0;
    double pre_f = 0.0;
    double post_t = 0.0;
    double post_f = 0.0;
    double conditional_phase = 0.0;  // arg of the corrected |11> entry, in (-pi, pi]

    Matrix pre() const { return z_phases(pre_t, pre_f); }
    Matrix post() const { return z_phases(post_t, post_f); }
};

// Post-gate phases that make <00|u|00> real positive and <01|u|01>, <10|u|10>
// real, leaving the conditional phase on |11>. Throws PhysicsError when a
// diagonal entry has magnitude below 1e-3.
VirtualZ virtual_z_correction(const Matrix& u);
// Same convention read from the coherences E(|00><k|) of a channel.
VirtualZ virtual_z_correction(const ComputationalChannel& e);

// Pre and post phases maximizing F_ent against target, started from `start`.
VirtualZ optimize_virtual_z(const ComputationalChannel& e, const Matrix& target, const VirtualZ& start = {});

} // namespace fluxgate
