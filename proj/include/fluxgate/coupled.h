#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fluxgate/device.h"

namespace fluxgate {

// Bare product label (transmon level, fluxonium level[, spectator level]).
struct Label {
    int t = 0;
    int f = 0;
    int s = 0;
    auto operator<=>(const Label&) const = default;
};

std::string to_string(const Label& l, bool with_spectator = false);

struct DressedSpectrum {
    std::vector<Label> labels;   // labels[i]: bare label of dressed state i
    RealVector energies;         // rad/ns, ascending, not ground referenced
    Matrix vectors;              // dressed states (columns) in the bare product basis
    RealMatrix overlaps;         // overlaps(b, i) = |<bare b|dressed i>|^2
    double assignment_quality = 1.0;

    bool hybridized() const { return assignment_quality < 0.5; }
    Index index_of(const Label& l) const;  // throws std::out_of_range
    double energy(const Label& l) const { return energies(index_of(l)); }
};

// Transmon (and optional spectator transmon) capacitively coupled to one
// fluxonium. Product order: transmon, fluxonium, spectator. The fluxonium
// spectrum is computed at construction; the dressed spectrum on first use.
class CoupledSystem {
public:
    CoupledSystem(TransmonParams transmon, FluxoniumParams fluxonium, double jc_ghz,
                  ConvergenceCheck check = ConvergenceCheck::enabled);
    CoupledSystem(TransmonParams transmon, FluxoniumSpectrum spectrum, double jc_ghz);

    CoupledSystem with_spectator(TransmonParams spectator, double jc_spectator_ghz) const;
    CoupledSystem with_coupling(double jc_ghz) const;
    CoupledSystem with_transmon(TransmonParams transmon) const;

    const TransmonParams& transmon() const { return transmon_; }
    const FluxoniumSpectrum& fluxonium() const { return *fluxonium_; }
    const std::optional<TransmonParams>& spectator() const { return spectator_; }
    double jc_ghz() const { return jc_ghz_; }
    double jc_spectator_ghz() const { return jc_spectator_ghz_; }

    int nt() const { return transmon_.n_levels; }
    int nf() const { return fluxonium_->n_levels(); }
    int ns() const { return spectator_ ? spectator_->n_levels : 1; }
    Index dim() const { return static_cast<Index>(nt()) * nf() * ns(); }
    Index bare_index(const Label& l) const;
    Label bare_label(Index i) const;

    Operator bare_hamiltonian() const;       // without coupling
    Operator coupling_hamiltonian() const;   // J q_t q_f (+ J_s q_f q_s)
    Operator hamiltonian() const;            // full static Hamiltonian, rad/ns
    Operator fluxonium_charge() const;       // I (x) q_f (x) I
    Operator transmon_charge() const;        // q_t (x) I (x) I
    // Diagonal bare energy of a product label, rad/ns.
    double bare_energy(const Label& l) const;

    const DressedSpectrum& dressed() const;

private:
    struct Cache;
    TransmonParams transmon_;
    std::shared_ptr<const FluxoniumSpectrum> fluxonium_;
    double jc_ghz_ = 0.0;
    std::optional<TransmonParams> spectator_;
    double jc_spectator_ghz_ = 0.0;
    std::shared_ptr<Cache> cache_;
};

Operator build_hamiltonian(const CoupledSystem& s);

// Greedy maximal-overlap labeling of the eigenstates of H against bare
// product states; throws PhysicsError on ties within 1e-6.
DressedSpectrum dressed_states(const CoupledSystem& s);

// (E_11 - E_10 - E_01 + E_00) with labels (transmon, fluxonium).
Frequency zz_coupling(const CoupledSystem& s);

// [(E_13 - E_10) - (E_03 - E_00)].
Frequency delta_shift(const CoupledSystem& s);

// <bra|op|ket> between dressed states; op given in the bare product basis.
cplx dressed_matrix_element(const CoupledSystem& s, const Operator& op, const Label& bra, const Label& ket);

} // namespace fluxgate
