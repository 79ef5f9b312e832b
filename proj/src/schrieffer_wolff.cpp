#include "fluxgate/schrieffer_wolff.h"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fluxgate/errors.h"

namespace fluxgate {

namespace {

constexpr double resonance_guard = mhz_to_rad(1.0);

double guarded(double denominator, const char* what)
{
    if (std::abs(denominator) < resonance_guard) {
        std::ostringstream os;
        os << "resonant denominator for " << what << " (detuning " << rad_to_mhz(denominator) << " MHz)";
        throw PhysicsError("schrieffer_wolff", os.str());
    }
    return denominator;
}

void require_model_levels(const CoupledSystem& s)
{
    if (s.nt() < 3 || s.nf() < 4)
        throw std::invalid_argument("schrieffer_wolff: needs >= 3 transmon and >= 4 fluxonium levels");
}

// Angular transition frequencies and matrix elements entering the closed forms.
struct ModelInputs {
    double wt, dt, wf1, w03, w12, q10, q30, q21, q32, jq;
};

ModelInputs model_inputs(const CoupledSystem& s)
{
    require_model_levels(s);
    const FluxoniumSpectrum& f = s.fluxonium();
    ModelInputs m{};
    m.wt = ghz_to_rad(s.transmon().omega_ghz);
    m.dt = ghz_to_rad(s.transmon().delta_ghz);
    m.wf1 = transition_frequency(f, 0, 1).rad_per_ns();
    m.w03 = transition_frequency(f, 0, 3).rad_per_ns();
    m.w12 = transition_frequency(f, 1, 2).rad_per_ns();
    m.q10 = f.q_elements(1, 0);
    m.q30 = f.q_elements(3, 0);
    m.q21 = f.q_elements(2, 1);
    m.q32 = f.q_elements(3, 2);
    m.jq = ghz_to_rad(s.jc_ghz()) * s.transmon().q_zpf();
    return m;
}

constexpr std::array<Label, 4> computational = {Label{0, 0}, Label{0, 1}, Label{1, 0}, Label{1, 1}};

} // namespace

Matrix sw_exact_unitary(const Matrix& p0, const Matrix& p)
{
    const Index n = p0.rows();
    const Matrix diff = p - p0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    if (norm >= 1.0 - 1e-12)
        throw PhysicsError("schrieffer_wolff", "||P - P0|| = " + std::to_string(norm) +
                                                   " >= 1; the SW transformation does not exist");
    const Matrix id = Matrix::Identity(n, n);
    return sqrtm_normal((id - 2.0 * p0) * (id - 2.0 * p));
}

ExactSW sw_exact(const Matrix& h, const std::vector<Index>& p0_states, const Matrix& p)
{
    ExactSW out;
    out.bare = p0_states;
    const Matrix p0 = projector(h.rows(), p0_states);
    out.unitary = sw_exact_unitary(p0, p);
    out.h_eff = p0 * out.unitary * h * out.unitary.adjoint() * p0;
    const Index k = static_cast<Index>(p0_states.size());
    out.block.resize(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) out.block(i, j) = out.h_eff(p0_states[i], p0_states[j]);
    return out;
}

ExactSW sw_exact(const CoupledSystem& s)
{
    const DressedSpectrum& d = s.dressed();
    std::vector<Index> bare;
    Matrix p = Matrix::Zero(s.dim(), s.dim());
    for (const Label& l : computational) {
        bare.push_back(s.bare_index(l));
        const auto v = d.vectors.col(d.index_of(l));
        p += v * v.adjoint();
    }
    return sw_exact(s.hamiltonian().matrix(), bare, p);
}

Matrix sw_transform_block(const ExactSW& sw, const Matrix& a)
{
    const Matrix full = sw.unitary * a * sw.unitary.adjoint();
    const Index k = static_cast<Index>(sw.bare.size());
    Matrix block(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) block(i, j) = full(sw.bare[i], sw.bare[j]);
    return block;
}

Operator sw_model_hamiltonian(const CoupledSystem& s)
{
    const ModelInputs m = model_inputs(s);
    const FluxoniumSpectrum& f = s.fluxonium();
    constexpr int nt = 3, nf = 4;
    Matrix h = Matrix::Zero(nt * nf, nt * nf);
    for (int t = 0; t < nt; ++t)
        for (int l = 0; l < nf; ++l)
            h(t * nf + l, t * nf + l) = m.wt * t + 0.5 * m.dt * t * (t - 1) + ghz_to_rad(f.energies_ghz(l));
    // J q_zpf (sigma_01 + sqrt2 sigma_12)_t (x) sum_{k>l} q_kl sigma_kl^f + h.c.
    for (int t = 1; t < nt; ++t)
        for (int k = 1; k < nf; ++k)
            for (int l = 0; l < k; ++l) {
                const double v = m.jq * std::sqrt(static_cast<double>(t)) * f.q_elements(k, l);
                const Index row = (t - 1) * nf + k, col = t * nf + l;
                h(row, col) += v;
                h(col, row) += v;
            }
    return {h, Basis::bare};
}

SWResult sw_effective_hamiltonian_2nd(const CoupledSystem& s, double eps_d_mhz)
{
    const ModelInputs m = model_inputs(s);
    const double d30 = guarded(m.w03 - m.wt, "|10> <-> |03>");
    const double d21 = guarded(m.w12 - m.wt, "|11> <-> |02>");
    const double d20 = guarded(m.wf1 - (m.wt + m.dt), "|11> <-> |20>");

    constexpr int nf = 4;
    auto idx = [](int t, int f) { return static_cast<Index>(t * nf + f); };
    Matrix s1 = Matrix::Zero(12, 12);
    // sigma^t_{01} sigma^f_{30}: |03><10| etc.
    s1(idx(0, 3), idx(1, 0)) = m.jq * m.q30 / d30;
    s1(idx(0, 2), idx(1, 1)) = m.jq * m.q21 / d21;
    s1(idx(1, 1), idx(2, 0)) = std::sqrt(2.0) * m.jq * m.q10 / d20;
    s1 -= Matrix(s1.adjoint());

    SWResult r;
    r.s1 = Operator(s1, Basis::bare);
    const double jq2 = m.jq * m.jq;
    r.zeta_10 = Frequency::from_rad(-jq2 * m.q30 * m.q30 / d30);
    r.zeta_11 = Frequency::from_rad(jq2 * (2.0 * m.q10 * m.q10 / d20 - m.q21 * m.q21 / d21));
    r.xi_zz_sw = r.zeta_11 - r.zeta_10;

    Matrix h = Matrix::Zero(4, 4);
    h(1, 1) = m.wf1;
    h(2, 2) = m.wt + r.zeta_10.rad_per_ns();
    h(3, 3) = m.wt + m.wf1 + r.zeta_11.rad_per_ns();
    h(1, 2) = h(2, 1) = m.jq * m.q10;
    r.h_eff2 = Operator(h, Basis::bare);

    const CrCoefficient cr = cr_coefficient_tf(s, eps_d_mhz);
    r.mu_cr = cr.mu_cr;
    r.mu_xt = cr.mu_xt;
    r.theta_d = cr.theta_d;
    r.mu_xf = drive_effective_coefficients(s, eps_d_mhz).mu_xf;
    return r;
}

CrCoefficient cr_coefficient_tf(const CoupledSystem& s, double eps_d_mhz)
{
    const ModelInputs m = model_inputs(s);
    const double a = m.q30 * m.q30 / guarded(m.wt - m.w03, "|10> <-> |03>");
    const double b = m.q21 * m.q21 / guarded(m.wt - m.w12, "|11> <-> |02>");
    const double eps = mhz_to_rad(eps_d_mhz);
    const double mu = m.jq / 4.0 * (a - b) * eps;
    const double xt = m.jq / 4.0 * (a + b) * eps;
    if (mu < 0.0) return {Frequency::from_rad(-mu), Frequency::from_rad(-xt), 3.0 * pi / 2.0};
    return {Frequency::from_rad(mu), Frequency::from_rad(xt), pi / 2.0};
}

CrCoefficient cr_coefficient_exact(const CoupledSystem& s, double eps_d_mhz)
{
    const ExactSW sw = sw_exact(s);
    const Matrix q = sw_transform_block(sw, s.fluxonium_charge().matrix());
    const double m0 = q(2, 0).imag();
    const double m1 = q(3, 1).imag();
    const double eps = mhz_to_rad(eps_d_mhz);
    const double mu = eps * (m0 - m1) / 4.0;
    const double xt = eps * (m0 + m1) / 4.0;
    if (mu < 0.0) return {Frequency::from_rad(-mu), Frequency::from_rad(-xt), 3.0 * pi / 2.0};
    return {Frequency::from_rad(mu), Frequency::from_rad(xt), pi / 2.0};
}

Frequency cr_coefficient_tt(const TransmonParams& control, const TransmonParams& target, double jc_mhz,
                            double eps_d_mhz)
{
    control.validate();
    target.validate();
    const double wc = ghz_to_rad(control.omega_ghz), wt = ghz_to_rad(target.omega_ghz);
    const double dc = ghz_to_rad(control.delta_ghz);
    const double d1 = guarded(wc - wt, "control-target |01> <-> |10>");
    const double d2 = guarded(dc + wc - wt, "control-target |11> <-> |20>");
    const double qc = control.q_zpf();
    return Frequency::from_rad(-mhz_to_rad(jc_mhz) * target.q_zpf() * qc * qc / d1 * (dc / d2) *
                               mhz_to_rad(eps_d_mhz) / 2.0);
}

DriveCoefficients drive_effective_coefficients(const CoupledSystem& s, double eps_d_mhz)
{
    const ModelInputs m = model_inputs(s);
    const double eps = mhz_to_rad(eps_d_mhz);
    const double a = m.q30 * m.q30 / guarded(m.wt - m.w03, "|10> <-> |03>");
    const double b = m.q21 * m.q21 / guarded(m.wt - m.w12, "|11> <-> |02>");
    return {Frequency::from_rad(0.5 * m.q10 * eps), Frequency::from_rad(m.jq / 4.0 * (a + b) * eps)};
}

double ideal_gate_time_ns(Frequency mu_cr)
{
    if (!(mu_cr.rad_per_ns() > 0.0)) throw PhysicsError("schrieffer_wolff", "ideal gate time needs mu_CR > 0");
    return pi / (4.0 * mu_cr.rad_per_ns());
}

} // namespace fluxgate
