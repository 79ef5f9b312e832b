#pragma once

#include <functional>
#include <vector>

#include "fluxgate/linalg.h"
#include "fluxgate/noise.h"

namespace fluxgate {

// H(t) = h0 + sum_k c_k(t) op_k, rad/ns. Breakpoints are times where some
// c_k has a kink; integration is restarted there.
struct TimeDependentHamiltonian {
    struct Term {
        Matrix op;
        std::function<double(double)> coefficient;
    };
    Matrix h0;
    std::vector<Term> terms;
    std::vector<double> breakpoints;

    Index dim() const { return h0.rows(); }
    Matrix at(double t) const;
};

struct PropagationOptions {
    double rtol = 1e-9;
    double atol = 1e-11;
    long max_steps = 5'000'000;
    double initial_step_ns = 1e-3;
    // When positive, take fixed steps of this size with no error control.
    double fixed_step_ns = 0.0;
    // Adaptive closed-system runs are repeated at tighter rtol until the Gram matrix
    // of the states moves by at most this much; 0 disables the check.
    double norm_tol = 1e-8;
};

// A jump operator embedded in the full space, stored as its nonzero entries
// with sqrt(rate) already folded in (rate in 1/ns).
struct SparseJump {
    struct Entry {
        Index row;
        Index col;
        double value;
    };
    std::vector<Entry> entries;
};

struct Dissipator {
    std::vector<SparseJump> jumps;
    Matrix decay;  // sum_k L_k^dag L_k
    Index dim = 0;

    bool empty() const { return jumps.empty(); }
    void add(const SparseJump& j);
};

Dissipator make_dissipator(Index dim);

// Embed single-device jumps acting on factor `position` of a product space
// with the given factor dimensions (row-major Kronecker order).
void add_embedded_jumps(Dissipator& d, const JumpOperatorSet& set, int position, const std::vector<int>& dims);

// Evolves the columns of psi0 under -i H(t).
Matrix propagate_states(const TimeDependentHamiltonian& h, const Matrix& psi0, double t0, double t1,
                        const PropagationOptions& opt = {});
Matrix propagate_unitary(const TimeDependentHamiltonian& h, double t0, double t1, const PropagationOptions& opt = {});

// Lindblad master equation. Throws PhysicsError if the final state has an
// eigenvalue below -1e-8.
Matrix propagate_lindblad(const TimeDependentHamiltonian& h, const Dissipator& d, const Matrix& rho0, double t0,
                          double t1, const PropagationOptions& opt = {});

std::vector<Matrix> evolve_channel(const TimeDependentHamiltonian& h, const Dissipator& d, double t0, double t1,
                                   const std::vector<Matrix>& inputs, const PropagationOptions& opt = {},
                                   unsigned threads = 1);

} // namespace fluxgate
