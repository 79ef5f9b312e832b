#include "fluxgate/workflows.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "fluxgate/errors.h"
#include "fluxgate/gates.h"
#include "fluxgate/parallel.h"
#include "fluxgate/schrieffer_wolff.h"
#include "fluxgate/yield.h"

namespace fluxgate {

namespace {

const double nan_value = std::numeric_limits<double>::quiet_NaN();

CoupledSystem make_system(const RunConfig& c, const TransmonParams& transmon)
{
    CoupledSystem s(transmon, c.fluxonium, c.jc_mhz * 1e-3);
    if (c.spectator) s = s.with_spectator(*c.spectator, c.jc_spectator_mhz * 1e-3);
    return s;
}

std::vector<double> transmon_frequencies(const RunConfig& c)
{
    return c.sweep ? c.sweep->values() : std::vector<double>{c.transmon.omega_ghz};
}

Table spectrum(const RunConfig& c)
{
    const FluxoniumSpectrum f = fluxonium_eigensystem(c.fluxonium);
    const JumpOperatorSet jumps = dielectric_jump_operators(f, c.noise.value_or(NoiseModel{}));
    Table t{{"level", "freq_ghz", "q_0k", "q_1k", "phi_0k", "phi_1k", "t1_k_to_0_us"}, {}};
    for (int k = 0; k < f.n_levels(); ++k) {
        // Parity-forbidden decays leave only roundoff in the matrix element.
        const double t1 = k == 0                                  ? nan_value
                          : std::abs(f.phi_elements(0, k)) < 1e-9 ? std::numeric_limits<double>::infinity()
                                                                  : jumps.t1_us(k, 0);
        t.add({static_cast<long>(k), f.energies_ghz(k), std::abs(f.q_elements(0, k)), std::abs(f.q_elements(1, k)),
               std::abs(f.phi_elements(0, k)), std::abs(f.phi_elements(1, k)), t1});
    }
    return t;
}

template <class Row>
Table sweep_table(const RunConfig& c, unsigned threads, std::vector<std::string> columns, Row row)
{
    const auto omegas = transmon_frequencies(c);
    std::vector<std::vector<Cell>> rows(omegas.size());
    const CoupledSystem base = make_system(c, c.transmon);
    parallel_for(omegas.size(), threads, [&](size_t i) {
        TransmonParams tp = c.transmon;
        tp.omega_ghz = omegas[i];
        rows[i] = row(base.with_transmon(tp));
    });
    Table t{std::move(columns), {}};
    for (auto& r : rows) t.add(std::move(r));
    return t;
}

template <class F>
double or_nan(F&& f)
{
    try {
        return f();
    } catch (const PhysicsError&) {
        return nan_value;
    }
}

Table zz_sweep(const RunConfig& c, unsigned threads)
{
    return sweep_table(c, threads, {"omega_t_ghz", "zz_khz", "zz_sw_khz"}, [](const CoupledSystem& s) {
        return std::vector<Cell>{s.transmon().omega_ghz, zz_coupling(s).khz(),
                                 or_nan([&] { return sw_effective_hamiltonian_2nd(s).xi_zz_sw.khz(); })};
    });
}

Table cr_coefficients(const RunConfig& c, unsigned threads)
{
    const double eps = c.pulse.eps_d_mhz, tr = c.pulse.t_rise_ns;
    return sweep_table(c, threads,
                       {"omega_t_ghz", "mu_cr_mhz", "mu_xt_mhz", "mu_cr_sw_mhz", "t_gate_simple_ns", "t_gate_echo_ns"},
                       [&](const CoupledSystem& s) {
                           const CrCoefficient ex = cr_coefficient_exact(s, eps);
                           return std::vector<Cell>{
                               s.transmon().omega_ghz, ex.mu_cr.mhz(), ex.mu_xt.mhz(),
                               or_nan([&] { return cr_coefficient_tf(s, eps).mu_cr.mhz(); }),
                               or_nan([&] { return calibrate_cr_pulse(s, eps, tr).t_pulse_ns; }),
                               or_nan([&] { return calibrate_cr_echo(s, eps, tr).total_time_ns(); })};
                       });
}

Table cr_gates(const RunConfig& c, unsigned threads)
{
    const auto omegas = transmon_frequencies(c);
    Table t{{"omega_t_ghz", "scheme", "t_gate_ns", "f_gate", "f_ent", "leakage_l1", "conditional_phase", "noisy"}, {}};
    const CoupledSystem base = make_system(c, c.transmon);
    // Noisy runs parallelize over channel inputs, noiseless ones over frequencies.
    const bool outer = !c.noise;
    std::vector<std::vector<Cell>> rows(omegas.size());
    parallel_for(omegas.size(), outer ? threads : 1u, [&](size_t i) {
        TransmonParams tp = c.transmon;
        tp.omega_ghz = omegas[i];
        const CoupledSystem s = base.with_transmon(tp);
        GateOptions opt;
        opt.threads = outer ? 1u : threads;
        const GateResult g =
            c.pulse.scheme == "echo"
                ? run_cr_gate(s, calibrate_cr_echo(s, c.pulse.eps_d_mhz, c.pulse.t_rise_ns), c.noise, opt)
                : run_cr_gate(s, calibrate_cr_pulse(s, c.pulse.eps_d_mhz, c.pulse.t_rise_ns), c.noise, opt);
        rows[i] = {tp.omega_ghz, c.pulse.scheme, g.t_total_ns, g.f_gate, g.f_ent, g.leakage_l1, g.conditional_phase,
                   static_cast<long>(g.noisy)};
    });
    for (auto& r : rows) t.add(std::move(r));
    return t;
}

Table cphase_gates(const RunConfig& c, unsigned threads)
{
    const CoupledSystem s = make_system(c, c.transmon);
    Table t{{"phi_over_pi", "t_pulse_ns", "eps_d_mhz", "omega_d_ghz", "f_gate", "f_ent", "leakage_l1",
             "conditional_phase_over_pi", "noisy"},
            {}};
    GateOptions opt;
    opt.threads = threads;
    for (double phi : c.pulse.target_phi) {
        CPhaseDriveSolution sol = solve_cphase_drive(s, phi, c.pulse.t_rise_ns);
        if (c.pulse.refine_t_pulse) sol = refine_cphase_pulse_length(s, sol, 3.0, opt);
        const GateResult g = run_cphase_gate(s, sol, c.noise, opt);
        t.add({phi / pi, sol.t_pulse_ns, sol.eps_d_mhz, sol.omega_d_ghz, g.f_gate, g.f_ent, g.leakage_l1,
               g.conditional_phase / pi, static_cast<long>(g.noisy)});
    }
    return t;
}

Table leakage_scan(const RunConfig& c, unsigned threads)
{
    const CoupledSystem s = make_system(c, c.transmon);
    const SweepConfig sw = c.sweep.value_or(SweepConfig{"t_offset", -20.0, 20.0, 41});
    GateOptions opt;
    opt.threads = threads;
    const LeakageScan scan = leakage_vs_gatetime_scan(s, c.pulse.target_phi, sw.values(), c.noise, opt);
    Table t{{"phi_over_pi", "t_pulse_ns", "envelope_integral_ns", "leakage_l1", "f_gate", "is_minimum"}, {}};
    for (const auto& r : scan.rows) {
        bool is_min = false;
        for (const auto& m : scan.minima) is_min = is_min || (m.target_phi == r.target_phi && m.t_pulse_ns == r.t_pulse_ns);
        t.add({r.target_phi / pi, r.t_pulse_ns, r.envelope_integral_ns, r.leakage_l1, r.f_gate, static_cast<long>(is_min)});
    }
    return t;
}

Table yield_table(const RunConfig& c, unsigned threads)
{
    Table t{{"sigma_r_over_r", "distance", "eps_d", "yield", "ci_low", "ci_high"}, {}};
    for (int k = 1; k <= 9; ++k) t.columns.push_back("mean_count_type_" + std::to_string(k));
    YieldOptions opt;
    opt.n_samples = c.yield.samples;
    opt.seed = c.seed;
    opt.threads = threads;
    opt.basis_dim = c.yield.basis_dim;
    for (int d : c.yield.distances) {
        LatticeSpec spec;
        spec.distance = d;
        spec.fluxonium = c.fluxonium;
        spec.transmon_delta_ghz = c.transmon.delta_ghz;
        spec.jc_mhz = c.jc_mhz;
        const Lattice lattice = build_lattice(spec);
        for (const YieldReport& r :
             zero_collision_yield(lattice, c.yield.sigma_grid, CollisionBoundTable::defaults(), c.yield.eps_d_mhz, opt)) {
            std::vector<Cell> row{r.sigma_r_over_r, static_cast<long>(r.distance), r.eps_d_mhz, r.yield, r.ci_low, r.ci_high};
            for (double m : r.mean_counts) row.push_back(m);
            t.add(std::move(row));
        }
    }
    return t;
}

} // namespace

std::string list_workflows()
{
    return "spectrum → Table I: fluxonium levels, charge and flux matrix elements, dielectric T1\n"
           "zz-sweep → Fig. 4: static ZZ against transmon frequency, exact and second order\n"
           "cr-coefficient → Fig. 5: cross-resonance rates and calibrated gate times\n"
           "cr-gate → Fig. 3: CR gate fidelity and leakage (simple or echo, optional noise)\n"
           "cphase-gate → text values: CPHASE fidelities for a list of conditional phases\n"
           "leakage-scan → Fig. 6: CPHASE leakage against gate time\n"
           "yield → Fig. 8: zero-collision yield and mean collision counts (Fig. 9)\n";
}

Table run_workflow(const RunConfig& c, unsigned threads)
{
    threads = std::max(1u, threads);
    switch (c.workflow) {
    case Workflow::spectrum: return spectrum(c);
    case Workflow::zz_sweep: return zz_sweep(c, threads);
    case Workflow::cr_coefficient: return cr_coefficients(c, threads);
    case Workflow::cr_gate: return cr_gates(c, threads);
    case Workflow::cphase_gate: return cphase_gates(c, threads);
    case Workflow::leakage_scan: return leakage_scan(c, threads);
    case Workflow::yield: return yield_table(c, threads);
    }
    throw ConfigError("workflow", "unhandled workflow");
}

} // namespace fluxgate
