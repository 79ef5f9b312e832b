#include "fluxgate/device.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "fluxgate/errors.h"

namespace fluxgate {

void TransmonParams::validate() const
{
    if (!(omega_ghz > 0.0)) throw std::invalid_argument("transmon: omega must be positive");
    if (!(delta_ghz < 0.0)) throw std::invalid_argument("transmon: anharmonicity must be negative");
    if (n_levels < 2) throw std::invalid_argument("transmon: n_levels must be >= 2");
}

double TransmonParams::ej_ghz() const
{
    const double d = omega_ghz - delta_ghz;
    return d * d / (8.0 * std::abs(delta_ghz));
}

double TransmonParams::ec_ghz() const { return std::abs(delta_ghz); }
double TransmonParams::q_zpf() const { return std::pow(ej_ghz() / (32.0 * std::abs(delta_ghz)), 0.25); }
double TransmonParams::phi_zpf() const { return 0.5 / q_zpf(); }

void FluxoniumParams::validate() const
{
    if (!(ec_ghz > 0.0 && el_ghz > 0.0 && ej_ghz > 0.0))
        throw std::invalid_argument("fluxonium: E_C, E_L and E_J must be positive");
    if (basis_dim < 60) throw std::invalid_argument("fluxonium: basis_dim below the convergence floor of 60");
    if (n_levels < 2 || n_levels > basis_dim) throw std::invalid_argument("fluxonium: n_levels out of range");
}

double FluxoniumParams::phi_zpf() const { return std::pow(2.0 * ec_ghz / el_ghz, 0.25); }
double FluxoniumParams::q_zpf() const { return 0.5 / phi_zpf(); }

FluxoniumParams fluxonium_cr_set() { return {1.0, 1.0, 4.0, pi, 120, 6}; }
FluxoniumParams fluxonium_cphase_set() { return {1.0, 0.5, 8.0, pi, 120, 5}; }

Operator FluxoniumSpectrum::hamiltonian() const
{
    Matrix h = Matrix::Zero(n_levels(), n_levels());
    for (int k = 0; k < n_levels(); ++k) h(k, k) = ghz_to_rad(energies_ghz(k));
    return {h};
}

Operator FluxoniumSpectrum::charge_operator() const { return {I_unit * q_elements.cast<cplx>()}; }
Operator FluxoniumSpectrum::flux_operator() const { return {phi_elements.cast<cplx>()}; }

Operator transmon_hamiltonian(const TransmonParams& p)
{
    p.validate();
    Matrix h = Matrix::Zero(p.n_levels, p.n_levels);
    for (int k = 0; k < p.n_levels; ++k)
        h(k, k) = ghz_to_rad(p.omega_ghz * k + 0.5 * p.delta_ghz * k * (k - 1));
    return {h};
}

Operator transmon_charge_operator(const TransmonParams& p)
{
    p.validate();
    const RealMatrix b = lowering(p.n_levels);
    return {(I_unit * p.q_zpf()) * (b.transpose() - b).cast<cplx>()};
}

Operator transmon_flux_operator(const TransmonParams& p)
{
    p.validate();
    const RealMatrix b = lowering(p.n_levels);
    return {(p.phi_zpf() * (b + b.transpose())).cast<cplx>()};
}

OscillatorOperators fluxonium_oscillator_operators(const FluxoniumParams& p)
{
    const RealMatrix a = lowering(p.basis_dim);
    return {p.phi_zpf() * (a + a.transpose()), p.q_zpf() * (a.transpose() - a)};
}

RealMatrix fluxonium_cosine(const RealMatrix& phi, double phi_ext)
{
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(phi);
    const RealVector c = (solver.eigenvalues().array() - phi_ext).cos();
    const RealMatrix& v = solver.eigenvectors();
    return v * c.asDiagonal() * v.transpose();
}

namespace {

// Hamiltonian in GHz (E/h); real symmetric.
RealMatrix fluxonium_hamiltonian_ghz(const FluxoniumParams& p)
{
    const auto ops = fluxonium_oscillator_operators(p);
    // q^2 = (i q_over_i)^2 = -q_over_i^2
    return -4.0 * p.ec_ghz * (ops.q_over_i * ops.q_over_i) + 0.5 * p.el_ghz * (ops.phi * ops.phi) -
           p.ej_ghz * fluxonium_cosine(ops.phi, p.phi_ext);
}

FluxoniumSpectrum diagonalize(const FluxoniumParams& p)
{
    const RealMatrix h = fluxonium_hamiltonian_ghz(p);
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw PhysicsError("device", "fluxonium eigensolver did not converge");

    const int n = p.n_levels;
    FluxoniumSpectrum s;
    s.params = p;
    s.energies_ghz = solver.eigenvalues().head(n).array() - solver.eigenvalues()(0);
    s.eigenvectors = solver.eigenvectors().leftCols(n);
    for (int k = 0; k < n; ++k) {
        Index imax = 0;
        s.eigenvectors.col(k).cwiseAbs().maxCoeff(&imax);
        if (s.eigenvectors(imax, k) < 0.0) s.eigenvectors.col(k) *= -1.0;
    }
    const auto ops = fluxonium_oscillator_operators(p);
    s.q_elements = s.eigenvectors.transpose() * ops.q_over_i * s.eigenvectors;
    s.phi_elements = s.eigenvectors.transpose() * ops.phi * s.eigenvectors;
    return s;
}

} // namespace

Operator fluxonium_hamiltonian(const FluxoniumParams& p)
{
    p.validate();
    return {(two_pi * fluxonium_hamiltonian_ghz(p)).cast<cplx>(), Basis::oscillator};
}

RealVector fluxonium_energies_ghz(const FluxoniumParams& p)
{
    p.validate();
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(fluxonium_hamiltonian_ghz(p), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw PhysicsError("device", "fluxonium eigensolver did not converge");
    return solver.eigenvalues().head(p.n_levels).array() - solver.eigenvalues()(0);
}

FluxoniumSpectrum fluxonium_eigensystem(const FluxoniumParams& p, ConvergenceCheck check)
{
    p.validate();
    FluxoniumSpectrum s = diagonalize(p);
    if (check == ConvergenceCheck::skipped) return s;

    FluxoniumParams bigger = p;
    bigger.basis_dim += 20;
    const FluxoniumSpectrum ref = diagonalize(bigger);
    const double energy_shift = (s.energies_ghz - ref.energies_ghz).cwiseAbs().maxCoeff();
    double q_shift = 0.0;
    for (int k = 0; k < p.n_levels; ++k)
        for (int l = 0; l < p.n_levels; ++l) {
            const double a = std::abs(s.q_elements(k, l)), b = std::abs(ref.q_elements(k, l));
            q_shift = std::max(q_shift, std::abs(a - b) / std::max(b, 1e-3));
        }
    if (energy_shift >= 1e-6 || q_shift >= 1e-5)
        throw PhysicsError("device", "fluxonium spectrum not converged at basis_dim=" + std::to_string(p.basis_dim) +
                                         " (energy shift " + std::to_string(energy_shift * 1e6) +
                                         " kHz, relative |q| shift " + std::to_string(q_shift) +
                                         "); try basis_dim=" + std::to_string(p.basis_dim + 40));
    return s;
}

Frequency transition_frequency(const FluxoniumSpectrum& s, int k, int l)
{
    if (k < 0 || l < 0 || k >= s.n_levels() || l >= s.n_levels())
        throw std::out_of_range("transition_frequency: level index out of range");
    return Frequency::from_ghz(s.energies_ghz(l) - s.energies_ghz(k));
}

} // namespace fluxgate
