#include "fluxgate/metrics.h"

#include <cmath>
#include <stdexcept>

#include "fluxgate/errors.h"
#include "fluxgate/optimize.h"

namespace fluxgate {

namespace {

Eigen::Map<const Eigen::VectorXcd> vec(const Matrix& x) { return {x.data(), x.size()}; }

Matrix unvec(const Vector& v) { return Eigen::Map<const Matrix>(v.data(), 4, 4); }

double wrap(double a) { return std::remainder(a, two_pi); }

} // namespace

ComputationalChannel::ComputationalChannel(Matrix superop) : s_(std::move(superop))
{
    if (s_.rows() != 16 || s_.cols() != 16) throw std::invalid_argument("ComputationalChannel: expected 16x16");
}

ComputationalChannel ComputationalChannel::from_unitary(const Matrix& m)
{
    if (m.rows() != 4 || m.cols() != 4) throw std::invalid_argument("ComputationalChannel: expected 4x4 unitary");
    return ComputationalChannel(kron(m.conjugate(), m));
}

ComputationalChannel ComputationalChannel::from_io(const std::vector<Matrix>& inputs, const std::vector<Matrix>& outputs)
{
    if (inputs.size() != 16 || outputs.size() != 16)
        throw std::invalid_argument("ComputationalChannel: need 16 input/output pairs");
    Matrix a(16, 16), b(16, 16);
    for (int j = 0; j < 16; ++j) {
        a.col(j) = vec(inputs[j]);
        b.col(j) = vec(outputs[j]);
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) throw std::invalid_argument("ComputationalChannel: inputs are linearly dependent");
    // S A = B  ->  S = B A^{-1}
    return ComputationalChannel(b * lu.inverse());
}

Matrix ComputationalChannel::apply(const Matrix& x) const { return unvec(s_ * vec(x)); }

double leakage_l1(const ComputationalChannel& e)
{
    return 1.0 - e.apply(Matrix::Identity(4, 4)).trace().real() / 4.0;
}

double entanglement_fidelity(const ComputationalChannel& e, const Matrix& target)
{
    // The vec'd normalized Paulis form an orthonormal basis, so the Pauli sum
    // is the trace of S_U^dag S.
    const Matrix su = ComputationalChannel::from_unitary(target).superop();
    return (su.adjoint() * e.superop()).trace().real() / 16.0;
}

double gate_fidelity(double f_ent, double l1) { return (4.0 * f_ent + 1.0 - l1) / 5.0; }

ChannelMetrics evaluate(const ComputationalChannel& e, const Matrix& target)
{
    ChannelMetrics m;
    m.f_ent = entanglement_fidelity(e, target);
    m.leakage_l1 = leakage_l1(e);
    m.f_gate = gate_fidelity(m.f_ent, m.leakage_l1);
    return m;
}

std::vector<Matrix> pauli_eigenstate_inputs()
{
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<Vector, 4> single = {
        Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}, Vector{{r, r}}, Vector{{cplx(r), cplx(0.0, r)}}};
    std::vector<Matrix> out;
    for (const auto& a : single)
        for (const auto& b : single) {
            const Vector v = kron(a, b);
            out.push_back(v * v.adjoint());
        }
    return out;
}

std::vector<Matrix> normalized_paulis()
{
    std::array<Matrix, 4> s;
    s[0] = Matrix::Identity(2, 2);
    s[1] = Matrix{{0.0, 1.0}, {1.0, 0.0}};
    s[2] = Matrix{{0.0, -I_unit}, {I_unit, 0.0}};
    s[3] = Matrix{{1.0, 0.0}, {0.0, -1.0}};
    std::vector<Matrix> out;
    for (const auto& a : s)
        for (const auto& b : s) out.push_back(kron(a, b) / 2.0);
    return out;
}

Matrix cr_target()
{
    const Matrix x{{0.0, 1.0}, {1.0, 0.0}};
    const Matrix z{{1.0, 0.0}, {0.0, -1.0}};
    const Matrix xz = kron(x, z);
    // XZ squares to the identity.
    return std::cos(pi / 4) * Matrix::Identity(4, 4) - I_unit * std::sin(pi / 4) * xz;
}

Matrix cphase_target(double phi)
{
    Matrix u = Matrix::Identity(4, 4);
    u(3, 3) = std::exp(I_unit * phi);
    return u;
}

Matrix z_phases(double a_t, double a_f)
{
    Matrix u = Matrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = std::exp(-I_unit * a_f);
    u(2, 2) = std::exp(-I_unit * a_t);
    u(3, 3) = std::exp(-I_unit * (a_t + a_f));
    return u;
}

Matrix x_rotation_transmon(double theta)
{
    const Matrix x{{0.0, 1.0}, {1.0, 0.0}};
    const Matrix xt = kron(x, Matrix::Identity(2, 2));
    return std::cos(theta / 2) * Matrix::Identity(4, 4) - I_unit * std::sin(theta / 2) * xt;
}

namespace {

// From the phases p_k of the diagonal (relative to |00>).
VirtualZ pinned(double p01, double p10, double p11)
{
    VirtualZ v;
    v.post_f = p01;
    v.post_t = p10;
    v.conditional_phase = wrap(p11 - p10 - p01);
    return v;
}

} // namespace

VirtualZ virtual_z_correction(const Matrix& u)
{
    if (u.rows() != 4 || u.cols() != 4) throw std::invalid_argument("virtual_z_correction: expected 4x4");
    for (int k = 0; k < 4; ++k)
        if (std::abs(u(k, k)) < 1e-3)
            throw PhysicsError("gates_metrics", "diagonal entry " + std::to_string(k) +
                                                    " of the realized gate is below 1e-3; gate is far from diagonal");
    const double p00 = std::arg(u(0, 0));
    return pinned(std::arg(u(1, 1)) - p00, std::arg(u(2, 2)) - p00, std::arg(u(3, 3)) - p00);
}

VirtualZ virtual_z_correction(const ComputationalChannel& e)
{
    // E(|00><k|)_{00,k} ~ u_00 conj(u_kk).
    std::array<double, 4> rel{};
    for (int k = 1; k < 4; ++k) {
        Matrix x = Matrix::Zero(4, 4);
        x(0, k) = 1.0;
        const cplx c = e.apply(x)(0, k);
        if (std::abs(c) < 1e-3)
            throw PhysicsError("gates_metrics", "coherence <00|E(|00><" + std::to_string(k) +
                                                    "|)|" + std::to_string(k) + "> is below 1e-3");
        rel[k] = -std::arg(c);
    }
    return pinned(rel[1], rel[2], rel[3]);
}

VirtualZ optimize_virtual_z(const ComputationalChannel& e, const Matrix& target, const VirtualZ& start)
{
    auto cost = [&](const std::vector<double>& a) {
        const auto c = e.after(z_phases(a[0], a[1])).then(z_phases(a[2], a[3]));
        return -entanglement_fidelity(c, target);
    };
    std::vector<double> x0{start.pre_t, start.pre_f, start.post_t, start.post_f};
    auto r = nelder_mead(cost, x0, 0.2, 1e-14, 6000);
    // Restart once from the optimum to escape a collapsed simplex.
    r = nelder_mead(cost, r.x, 0.02, 1e-15, 6000);
    VirtualZ v;
    v.pre_t = wrap(r.x[0]);
    v.pre_f = wrap(r.x[1]);
    v.post_t = wrap(r.x[2]);
    v.post_f = wrap(r.x[3]);
    // Not meaningful for a non-diagonal target.
    v.conditional_phase = std::nan("");
    return v;
}

} // namespace fluxgate
