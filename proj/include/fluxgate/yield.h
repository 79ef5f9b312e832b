#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluxgate/device.h"

namespace fluxgate {

struct LatticeSpec {
    int distance = 3;
    std::array<double, 4> palette_ghz{4.3, 4.7, 5.3, 5.7};
    FluxoniumParams fluxonium = fluxonium_cr_set();
    double transmon_delta_ghz = -0.3;
    double jc_mhz = 20.0;
    // Optional explicit data-qubit frequencies (row-major, d*d); overrides the palette pattern.
    std::vector<double> transmon_frequencies_ghz;

    void validate() const;
};

// Rotated surface code: data transmons on a d x d grid, fluxonium ancillas on
// the (d-1)^2 bulk plaquettes plus 2(d-1) boundary plaquettes.
struct Lattice {
    struct Fluxonium {
        double row = 0.0;  // plaquette center
        double col = 0.0;
        std::vector<int> transmons;
    };
    LatticeSpec spec;
    std::vector<double> transmon_ghz;  // target frequencies, index r * d + c
    std::vector<Fluxonium> fluxonia;

    int n_transmons() const { return static_cast<int>(transmon_ghz.size()); }
    int n_fluxonia() const { return static_cast<int>(fluxonia.size()); }
};

// Throws std::invalid_argument when the transmons around a fluxonium repeat a frequency.
Lattice build_lattice(const LatticeSpec& spec);

struct DisorderModel {
    double sigma_r_over_r = 0.0;
    int n_junctions = 100;
    std::uint64_t seed = 0;

    void validate() const;
    double sigma_omega_rel() const { return sigma_r_over_r / 2.0; }
    double sigma_ej_rel() const { return sigma_r_over_r; }
    double sigma_el_rel() const;
};

struct SampledDevice {
    std::vector<double> transmon_ghz;
    std::vector<double> fluxonium_ej_ghz;
    std::vector<double> fluxonium_el_ghz;
};

// Node ids: transmons 0..n_t-1, then fluxonia. Each node draws from its own
// stream keyed by (seed, sample, node), so draws do not depend on evaluation order.
SampledDevice sample_device(const Lattice& lattice, const DisorderModel& disorder, std::uint64_t sample_index);

// Standard normal variates of the stream (seed, sample, node).
std::vector<double> normal_stream(std::uint64_t seed, std::uint64_t sample, std::uint64_t node, int count);

enum class BoundKind { window, disabled, region, merged };

struct Bound {
    BoundKind kind = BoundKind::window;
    double half_width_mhz = 0.0;
};

struct CollisionBoundTable {
    std::vector<double> eps_d_mhz{100.0, 300.0, 500.0};
    // bounds[type - 1][column of eps_d]
    std::array<std::vector<Bound>, 9> bounds;

    static CollisionBoundTable defaults();
    // Column for eps_d; throws std::invalid_argument if absent.
    int column(double eps_d_mhz) const;
    const Bound& at(int type, double eps_d_mhz) const { return bounds[type - 1][column(eps_d_mhz)]; }
};

// Transition frequencies of one fluxonium used by the collision rules, GHz.
struct FluxoniumTransitions {
    double w12 = 0.0;
    double w03 = 0.0;
    double w04 = 0.0;
    double w15 = 0.0;
    double w05 = 0.0;
};
FluxoniumTransitions transitions_of(const RealVector& energies_ghz);

struct Collision {
    int type = 0;
    int fluxonium = 0;
    int target = 0;
    int spectator = -1;
};

// Fluxonium transitions are passed per fluxonium node.
std::vector<Collision> check_collisions(const Lattice& lattice, const std::vector<double>& transmon_ghz,
                                        const std::vector<FluxoniumTransitions>& fluxonia,
                                        const CollisionBoundTable& bounds, double eps_d_mhz);

struct YieldReport {
    double sigma_r_over_r = 0.0;
    int distance = 0;
    double eps_d_mhz = 0.0;
    int n_samples = 0;
    int zero_collision_samples = 0;
    double yield = 0.0;
    double ci_low = 0.0;   // exact (Clopper-Pearson) 95% interval
    double ci_high = 0.0;
    std::array<double, 9> mean_counts{};
};

struct YieldOptions {
    int n_samples = 6000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    int basis_dim = 80;
    int n_junctions = 100;
};

// One report per (sigma, eps_d); the same disorder samples serve all eps_d.
std::vector<YieldReport> zero_collision_yield(const Lattice& lattice, const std::vector<double>& sigma_grid,
                                              const CollisionBoundTable& bounds, const std::vector<double>& eps_d_mhz,
                                              const YieldOptions& opt = {});

std::array<double, 2> clopper_pearson(int successes, int trials, double confidence = 0.95);

} // namespace fluxgate
