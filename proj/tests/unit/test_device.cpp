#include <doctest.h>

#include "fluxgate/device.h"
#include "fluxgate/noise.h"

using namespace fluxgate;

TEST_SUITE("device")
{
    TEST_CASE("transmon ladder")
    {
        const TransmonParams t{5.3, -0.3, 3};
        const Matrix h = transmon_hamiltonian(t).matrix();
        CHECK(rad_to_ghz(h(0, 0).real()) == doctest::Approx(0.0));
        CHECK(rad_to_ghz(h(1, 1).real()) == doctest::Approx(5.3));
        CHECK(rad_to_ghz(h(2, 2).real()) == doctest::Approx(10.3));
        // E_J = 5.6^2 / 2.4, q_zpf = (E_J / 9.6)^(1/4)
        CHECK(t.ej_ghz() == doctest::Approx(13.0666667).epsilon(1e-7));
        CHECK(t.q_zpf() == doctest::Approx(1.0801234).epsilon(1e-6));
        const Matrix q = transmon_charge_operator(t).matrix();
        CHECK(std::abs(q(0, 1)) == doctest::Approx(t.q_zpf()));
        CHECK(std::abs(q(1, 2)) == doctest::Approx(std::sqrt(2.0) * t.q_zpf()));
        CHECK((q - q.adjoint()).norm() < 1e-14);
        CHECK_THROWS_AS(transmon_hamiltonian({5.0, 0.3, 3}), std::invalid_argument);
    }

    TEST_CASE("harmonic limit")
    {
        FluxoniumParams p{1.0, 1.0, 1e-12, pi, 80, 5};
        const RealVector e = fluxonium_energies_ghz(p);
        const double w = std::sqrt(8.0);
        for (int k = 0; k < 5; ++k) CHECK(e(k) == doctest::Approx(w * k).epsilon(1e-9));
    }

    TEST_CASE("canonical commutator in the basis interior")
    {
        const FluxoniumParams p = fluxonium_cr_set();
        const OscillatorOperators o = fluxonium_oscillator_operators(p);
        const Matrix phi = o.phi.cast<cplx>();
        const Matrix q = I_unit * o.q_over_i.cast<cplx>();
        const Matrix c = phi * q - q * phi;
        const Index n = p.basis_dim / 2;
        const Matrix interior = c.topLeftCorner(n, n) - I_unit * Matrix::Identity(n, n);
        CHECK(interior.cwiseAbs().maxCoeff() < 1e-8);
    }

    TEST_CASE("parameter sets")
    {
        const FluxoniumSpectrum cr = fluxonium_eigensystem(fluxonium_cr_set());
        CHECK(cr.energies_ghz(1) == doctest::Approx(0.582).epsilon(0.01));
        CHECK(cr.energies_ghz(4) == doctest::Approx(9.86).epsilon(0.01));
        CHECK(cr.energies_ghz(5) == doctest::Approx(13.23).epsilon(0.01));
        CHECK(transition_frequency(cr, 0, 1).mhz() == doctest::Approx(cr.energies_ghz(1) * 1e3));
        CHECK_THROWS_AS(transition_frequency(cr, 0, 9), std::out_of_range);

        const FluxoniumSpectrum cp = fluxonium_eigensystem(fluxonium_cphase_set());
        CHECK(cp.energies_ghz(1) == doctest::Approx(0.030).epsilon(0.05));
    }

    TEST_CASE("matrix elements are real and parity selective")
    {
        const FluxoniumSpectrum s = fluxonium_eigensystem(fluxonium_cr_set());
        CHECK((s.q_elements + s.q_elements.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((s.phi_elements - s.phi_elements.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        // At half flux the potential is even, so same-parity elements vanish.
        CHECK(std::abs(s.q_elements(0, 2)) < 1e-8);
        CHECK(std::abs(s.phi_elements(1, 3)) < 1e-8);
        CHECK(std::abs(s.q_elements(0, 1)) > 1e-3);
    }

    TEST_CASE("spectrum converges under basis growth")
    {
        for (FluxoniumParams p : {fluxonium_cr_set(), fluxonium_cphase_set()}) {
            const FluxoniumSpectrum a = fluxonium_eigensystem(p);
            p.basis_dim += 40;
            const FluxoniumSpectrum b = fluxonium_eigensystem(p, ConvergenceCheck::skipped);
            CHECK((a.energies_ghz - b.energies_ghz).cwiseAbs().maxCoeff() < 1e-6);
        }
        FluxoniumParams low = fluxonium_cr_set();
        low.basis_dim = 59;
        CHECK_THROWS_AS(fluxonium_eigensystem(low), std::invalid_argument);
    }

    TEST_CASE("flux bias symmetry about half flux")
    {
        FluxoniumParams p = fluxonium_cr_set();
        p.phi_ext = pi + 0.1;
        const RealVector up = fluxonium_energies_ghz(p);
        p.phi_ext = pi - 0.1;
        const RealVector down = fluxonium_energies_ghz(p);
        CHECK((up - down).cwiseAbs().maxCoeff() < 1e-9);
        p.phi_ext = pi;
        CHECK(fluxonium_energies_ghz(p)(1) < up(1));
    }

    TEST_CASE("eigenvalue-only path agrees with the full solve")
    {
        const FluxoniumParams p = fluxonium_cr_set();
        const RealVector e = fluxonium_energies_ghz(p);
        const FluxoniumSpectrum s = fluxonium_eigensystem(p, ConvergenceCheck::skipped);
        CHECK((e - s.energies_ghz).cwiseAbs().maxCoeff() < 1e-10);
    }

    TEST_CASE("dielectric relaxation")
    {
        const NoiseModel noise;
        const JumpOperatorSet cr = dielectric_jump_operators(fluxonium_eigensystem(fluxonium_cr_set()), noise);
        CHECK(cr.t1_us(1, 0) == doctest::Approx(123.0).epsilon(0.10));
        CHECK(cr.t1_us(3, 0) == doctest::Approx(20.0).epsilon(0.10));
        const JumpOperatorSet cp = dielectric_jump_operators(fluxonium_eigensystem(fluxonium_cphase_set()), noise);
        CHECK(cp.t1_us(1, 0) == doctest::Approx(3700.0).epsilon(0.15));
        CHECK(cp.t1_us(3, 0) == doctest::Approx(6.5).epsilon(0.15));
        const JumpOperatorSet t = dielectric_jump_operators(TransmonParams{4.37, -0.3, 3}, noise);
        CHECK(t.t1_us(1, 0) == doctest::Approx(130.0).epsilon(0.10));

        // Detailed balance between up and down rates.
        const double f01 = fluxonium_eigensystem(fluxonium_cr_set()).energies_ghz(1);
        const double n = thermal_occupation(ghz_to_rad(f01), noise.temperature_mk);
        CHECK(cr.rate_per_us(JumpKind::up, 1, 0) / cr.rate_per_us(JumpKind::down, 1, 0) ==
              doctest::Approx(n / (1.0 + n)));
    }

    TEST_CASE("thermal occupation")
    {
        // h f / k T for 1 GHz at 20 mK
        const double x = si::h * 1e9 / (si::kB * 0.020);
        CHECK(thermal_occupation(ghz_to_rad(1.0), 20.0) == doctest::Approx(1.0 / std::expm1(x)));
        CHECK(thermal_occupation(ghz_to_rad(1.0), 0.0) == 0.0);
    }
}
