#include "fluxgate/gates.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fluxgate/errors.h"
#include "fluxgate/optimize.h"
#include "fluxgate/parallel.h"
#include "fluxgate/schrieffer_wolff.h"

namespace fluxgate {

namespace {

const double nan_value = std::numeric_limits<double>::quiet_NaN();

// One piece of a gate schedule: a drive pulse starting at t0 on the global
// clock, or an instantaneous unitary (bare basis) applied at t0.
struct Step {
    bool instant = false;
    PulseSpec pulse;
    double t0 = 0.0;
    Matrix unitary;

    double t1() const { return instant ? t0 : t0 + pulse.t_pulse_ns; }
};

struct Realized {
    ComputationalChannel channel;
    Matrix block;
};

class Engine {
public:
    explicit Engine(const CoupledSystem& s) : s_(s), d_(s.dressed())
    {
        h0_ = s.hamiltonian().matrix();
        q_ = s.fluxonium_charge().matrix();
        const int ns = s.spectator() ? 2 : 1;
        for (int m = 0; m < ns; ++m) {
            std::array<Index, 4> c{};
            for (int t = 0; t < 2; ++t)
                for (int f = 0; f < 2; ++f) c[2 * t + f] = d_.index_of({t, f, m});
            comp_.push_back(c);
        }
        weight_ = 1.0 / static_cast<double>(ns);
        const double e0 = d_.energy({0, 0, 0});
        w_t_ = d_.energy({1, 0, 0}) - e0;
        w_f_ = d_.energy({0, 1, 0}) - e0;
        w_s_ = s.spectator() ? d_.energy({0, 0, 1}) - e0 : 0.0;
    }

    // R = -i X on the fluxonium qubit levels of the dressed basis (identity
    // elsewhere), applied in the frame rotating at the fluxonium qubit
    // frequency: D(t) R D(t)^dag, returned in the bare basis.
    Matrix pi_rotation_at(double t) const
    {
        const Index n = s_.dim();
        Matrix r = Matrix::Zero(n, n);
        Vector ph(n);
        for (Index i = 0; i < n; ++i) {
            const Label l = d_.labels[static_cast<size_t>(i)];
            if (l.f <= 1)
                r(d_.index_of({l.t, 1 - l.f, l.s}), i) = -I_unit;
            else
                r(i, i) = 1.0;
            ph(i) = l.f == 1 ? std::exp(-I_unit * w_f_ * t) : cplx(1.0);
        }
        const Matrix rot = ph.asDiagonal() * r * ph.conjugate().asDiagonal();
        return d_.vectors * rot * d_.vectors.adjoint();
    }

    Realized run(const std::vector<Step>& steps, double t_total, const std::optional<NoiseModel>& noise,
                 const GateOptions& opt) const
    {
        return noise ? run_noisy(steps, t_total, *noise, opt) : run_noiseless(steps, t_total, opt);
    }

private:
    TimeDependentHamiltonian hamiltonian(const Step& st) const
    {
        TimeDependentHamiltonian h;
        h.h0 = h0_;
        const PulseSpec p = st.pulse;
        const double t0 = st.t0, eps = mhz_to_rad(p.eps_d_mhz), wd = ghz_to_rad(p.omega_d_ghz);
        h.terms.push_back({q_, [p, t0, eps, wd](double t) { return envelope(t - t0, p) * eps * std::cos(wd * t + p.theta_d); }});
        for (double b : p.breakpoints()) h.breakpoints.push_back(t0 + b);
        return h;
    }

    // Undoes free evolution at the single-qubit dressed frequencies on the
    // computational states. E_11 is deliberately not used: static ZZ stays in
    // the realized gate.
    Vector frame(double t_total) const
    {
        Vector f = Vector::Ones(d_.energies.size());
        for (size_t m = 0; m < comp_.size(); ++m)
            for (int k = 0; k < 4; ++k) {
                const double w = (k / 2) * w_t_ + (k % 2) * w_f_ + static_cast<double>(m) * w_s_;
                f(comp_[m][k]) = std::exp(I_unit * w * t_total);
            }
        return f;
    }

    Realized run_noiseless(const std::vector<Step>& steps, double t_total, const GateOptions& opt) const
    {
        const Index ncomp = static_cast<Index>(4 * comp_.size());
        Matrix psi(s_.dim(), ncomp);
        for (size_t m = 0; m < comp_.size(); ++m)
            for (int k = 0; k < 4; ++k) psi.col(static_cast<Index>(4 * m + k)) = d_.vectors.col(comp_[m][k]);
        for (const Step& st : steps)
            psi = st.instant ? Matrix(st.unitary * psi) : propagate_states(hamiltonian(st), psi, st.t0, st.t1(), opt.propagation);

        const Matrix out = frame(t_total).asDiagonal() * (d_.vectors.adjoint() * psi);
        Matrix sop = Matrix::Zero(16, 16);
        Matrix block;
        for (size_t m = 0; m < comp_.size(); ++m)
            for (size_t mp = 0; mp < comp_.size(); ++mp) {
                Matrix b(4, 4);
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) b(r, c) = out(comp_[mp][r], static_cast<Index>(4 * m + c));
                sop += weight_ * kron(b.conjugate(), b);
                if (m == 0 && mp == 0) block = b;
            }
        return {ComputationalChannel(sop), block};
    }

    Realized run_noisy(const std::vector<Step>& steps, double t_total, const NoiseModel& noise,
                       const GateOptions& opt) const
    {
        std::vector<int> dims{s_.nt(), s_.nf()};
        if (s_.spectator()) dims.push_back(s_.ns());
        Dissipator diss = make_dissipator(s_.dim());
        add_embedded_jumps(diss, dielectric_jump_operators(s_.transmon(), noise), 0, dims);
        add_embedded_jumps(diss, dielectric_jump_operators(s_.fluxonium(), noise), 1, dims);
        if (s_.spectator()) add_embedded_jumps(diss, dielectric_jump_operators(*s_.spectator(), noise), 2, dims);

        std::vector<TimeDependentHamiltonian> hs;
        for (const Step& st : steps) hs.push_back(st.instant ? TimeDependentHamiltonian{} : hamiltonian(st));

        const auto inputs = pauli_eigenstate_inputs();
        const Vector fr = frame(t_total);
        std::vector<Matrix> outputs(inputs.size());
        parallel_for(inputs.size(), opt.threads, [&](size_t j) {
            Matrix rho = Matrix::Zero(s_.dim(), s_.dim());
            for (const auto& c : comp_) {
                Matrix wc(s_.dim(), 4);
                for (int k = 0; k < 4; ++k) wc.col(k) = d_.vectors.col(c[k]);
                rho += weight_ * wc * inputs[j] * wc.adjoint();
            }
            for (size_t k = 0; k < steps.size(); ++k) {
                const Step& st = steps[k];
                if (st.instant)
                    rho = st.unitary * rho * st.unitary.adjoint();
                else
                    rho = propagate_lindblad(hs[k], diss, rho, st.t0, st.t1(), opt.propagation);
            }
            const Matrix sigma = fr.asDiagonal() * (d_.vectors.adjoint() * rho * d_.vectors) * fr.conjugate().asDiagonal();
            Matrix o = Matrix::Zero(4, 4);
            for (const auto& c : comp_)
                for (int r = 0; r < 4; ++r)
                    for (int q = 0; q < 4; ++q) o(r, q) += sigma(c[r], c[q]);
            outputs[j] = o;
        });
        return {ComputationalChannel::from_io(inputs, outputs), Matrix()};
    }

    const CoupledSystem& s_;
    const DressedSpectrum& d_;
    Matrix h0_, q_;
    std::vector<std::array<Index, 4>> comp_;
    double weight_ = 1.0;
    double w_t_ = 0.0, w_f_ = 0.0, w_s_ = 0.0;
};

double conditional_phase_of(const Realized& r)
{
    try {
        return r.block.size() ? virtual_z_correction(r.block).conditional_phase
                              : virtual_z_correction(r.channel).conditional_phase;
    } catch (const PhysicsError&) {
        return nan_value;
    }
}

GateResult assemble(const Realized& r, const ComputationalChannel& corrected, const Matrix& target,
                    const GateCorrections& corr, double t_total, bool noisy)
{
    GateResult g;
    const ChannelMetrics m = evaluate(corrected, target);
    g.f_gate = m.f_gate;
    g.f_ent = m.f_ent;
    g.leakage_l1 = m.leakage_l1;
    g.t_total_ns = t_total;
    g.corrections = corr;
    g.noisy = noisy;
    g.conditional_phase = conditional_phase_of(r);
    g.channel = r.channel;
    g.block = r.block;
    return g;
}

ComputationalChannel corrected_cr(const ComputationalChannel& e, const VirtualZ& z, double x_angle)
{
    return e.after(z.pre()).then(x_rotation_transmon(-x_angle)).then(z.post());
}

} // namespace

GateResult run_cr_gate(const CoupledSystem& s, const PulseSpec& spec, const std::optional<NoiseModel>& noise,
                       const GateOptions& opt)
{
    spec.validate();
    if (noise) noise->validate();
    const Engine engine(s);
    Step st;
    st.pulse = spec;
    const Realized r = engine.run({st}, spec.t_pulse_ns, noise, opt);
    const Matrix target = opt.target.value_or(cr_target());

    GateCorrections corr;
    if (spec.eps_d_mhz != 0.0) {
        // Rates at theta_d = pi/2; the transmon X term scales with sin(theta_d).
        const CrCoefficient c = cr_coefficient_exact(s, spec.eps_d_mhz);
        const double mu_xt = (c.theta_d == pi / 2 ? 1.0 : -1.0) * c.mu_xt.rad_per_ns();
        corr.x_angle_estimate = 2.0 * mu_xt * std::sin(spec.theta_d) * envelope_integral_ns(spec);
    }
    corr.x_angle = corr.x_angle_estimate;

    VirtualZ z;
    auto inner = [&](double x) {
        z = optimize_virtual_z(r.channel.then(x_rotation_transmon(-x)), target, z);
        return -entanglement_fidelity(corrected_cr(r.channel, z, x), target);
    };
    if (opt.refine_x_angle && corr.x_angle_estimate != 0.0) {
        const double w = opt.x_window * std::abs(corr.x_angle_estimate);
        corr.x_angle = minimize_scalar(inner, corr.x_angle_estimate - w, corr.x_angle_estimate + w).x[0];
    }
    inner(corr.x_angle);
    corr.z = z;
    return assemble(r, corrected_cr(r.channel, corr.z, corr.x_angle), target, corr, spec.t_pulse_ns, noise.has_value());
}

GateResult run_cr_gate(const CoupledSystem& s, const EchoSpec& spec, const std::optional<NoiseModel>& noise,
                       const GateOptions& opt)
{
    spec.half_pulse.validate();
    if (noise) noise->validate();
    const Engine engine(s);
    const double th = spec.half_pulse.t_pulse_ns, total = spec.total_time_ns();
    std::vector<Step> steps(4);
    steps[0].pulse = spec.first_half();
    steps[1].instant = true;
    steps[1].t0 = th;
    steps[1].unitary = engine.pi_rotation_at(th);
    steps[2].pulse = spec.second_half();
    steps[2].t0 = th;
    steps[3].instant = true;
    steps[3].t0 = total;
    steps[3].unitary = engine.pi_rotation_at(total);

    const Realized r = engine.run(steps, total, noise, opt);
    const Matrix target = opt.target.value_or(cr_target());
    GateCorrections corr;
    corr.z = optimize_virtual_z(r.channel, target);
    return assemble(r, corrected_cr(r.channel, corr.z, 0.0), target, corr, total, noise.has_value());
}

GateResult run_cphase_gate(const CoupledSystem& s, const CPhaseDriveSolution& sol,
                           const std::optional<NoiseModel>& noise, const GateOptions& opt)
{
    const PulseSpec spec = sol.pulse();
    spec.validate();
    if (noise) noise->validate();
    const Engine engine(s);
    Step st;
    st.pulse = spec;
    const Realized r = engine.run({st}, spec.t_pulse_ns, noise, opt);
    const Matrix target = opt.target.value_or(cphase_target(sol.target_phi));

    GateCorrections corr;
    corr.z = r.block.size() ? virtual_z_correction(r.block) : virtual_z_correction(r.channel);
    GateResult g = assemble(r, r.channel.then(corr.z.post()), target, corr, spec.t_pulse_ns, noise.has_value());
    g.conditional_phase = corr.z.conditional_phase;
    return g;
}

CPhaseDriveSolution refine_cphase_pulse_length(const CoupledSystem& s, const CPhaseDriveSolution& sol,
                                               double window_ns, const GateOptions& opt)
{
    CPhaseDriveSolution trial = sol;
    const double lo = std::max(sol.t_pulse_ns - window_ns, 2.0 * sol.t_rise_ns);
    const auto r = minimize_scalar(
        [&](double t) {
            trial.t_pulse_ns = t;
            return -run_cphase_gate(s, trial, std::nullopt, opt).f_gate;
        },
        lo, sol.t_pulse_ns + window_ns, 60);
    trial.t_pulse_ns = r.x[0];
    return trial;
}

LeakageScan leakage_vs_gatetime_scan(const CoupledSystem& s, const std::vector<double>& phi_targets,
                                     const std::vector<double>& t_offsets_ns, const std::optional<NoiseModel>& noise,
                                     const GateOptions& opt)
{
    LeakageScan scan;
    for (double phi : phi_targets) {
        const CPhaseDriveSolution sol = solve_cphase_drive(s, phi, 10.0);
        std::vector<LeakageScanRow> rows(t_offsets_ns.size());
        GateOptions inner = opt;
        inner.threads = noise ? opt.threads : 1;
        parallel_for(t_offsets_ns.size(), noise ? 1u : opt.threads, [&](size_t i) {
            CPhaseDriveSolution trial = sol;
            trial.t_pulse_ns = sol.t_pulse_ns + t_offsets_ns[i];
            LeakageScanRow& row = rows[i];
            row.target_phi = phi;
            row.t_pulse_ns = trial.t_pulse_ns;
            row.envelope_integral_ns = envelope_integral_ns(trial.pulse());
            const GateResult g = run_cphase_gate(s, trial, noise, inner);
            row.leakage_l1 = g.leakage_l1;
            row.f_gate = g.f_gate;
        });
        if (!rows.empty()) {
            const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
                return a.leakage_l1 < b.leakage_l1;
            });
            scan.minima.push_back(*best);
        }
        scan.rows.insert(scan.rows.end(), rows.begin(), rows.end());
    }
    return scan;
}

std::vector<CrScanRow> cr_leakage_scan(const CoupledSystem& s, const std::vector<double>& omega_t_ghz,
                                       double eps_d_mhz, double t_rise_ns, const std::optional<NoiseModel>& noise,
                                       const GateOptions& opt)
{
    std::vector<CrScanRow> rows(omega_t_ghz.size());
    GateOptions inner = opt;
    inner.threads = 1;
    parallel_for(omega_t_ghz.size(), opt.threads, [&](size_t i) {
        TransmonParams tp = s.transmon();
        tp.omega_ghz = omega_t_ghz[i];
        const CoupledSystem sys = s.with_transmon(tp);
        CrScanRow& row = rows[i];
        row.omega_t_ghz = tp.omega_ghz;
        try {
            const EchoSpec echo = calibrate_cr_echo(sys, eps_d_mhz, t_rise_ns);
            const GateResult g = run_cr_gate(sys, echo, noise, inner);
            row.t_gate_ns = g.t_total_ns;
            row.leakage_l1 = g.leakage_l1;
            row.f_gate = g.f_gate;
        } catch (const PhysicsError&) {
            row.t_gate_ns = row.leakage_l1 = row.f_gate = nan_value;
        }
    });
    return rows;
}

} // namespace fluxgate
