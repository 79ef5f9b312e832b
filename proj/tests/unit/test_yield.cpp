#include <doctest.h>

#include <set>

#include "fluxgate/yield.h"

using namespace fluxgate;

namespace {

LatticeSpec spec_of(int d)
{
    LatticeSpec s;
    s.distance = d;
    return s;
}

std::vector<FluxoniumTransitions> nominal_transitions(const Lattice& l)
{
    const FluxoniumTransitions t = transitions_of(fluxonium_energies_ghz(l.spec.fluxonium));
    return std::vector<FluxoniumTransitions>(static_cast<size_t>(l.n_fluxonia()), t);
}

bool has_type(const std::vector<Collision>& c, int type)
{
    return std::any_of(c.begin(), c.end(), [&](const Collision& x) { return x.type == type; });
}

} // namespace

TEST_SUITE("yield")
{
    TEST_CASE("lattice geometry")
    {
        for (int d : {3, 5, 7}) {
            const Lattice l = build_lattice(spec_of(d));
            CHECK(l.n_transmons() == d * d);
            CHECK(l.n_fluxonia() == d * d - 1);
            int bulk = 0, boundary = 0;
            std::vector<int> degree(static_cast<size_t>(d * d), 0);
            for (const auto& f : l.fluxonia) {
                if (f.transmons.size() == 4) ++bulk;
                if (f.transmons.size() == 2) ++boundary;
                for (int t : f.transmons) ++degree[t];
                std::set<double> freqs;
                for (int t : f.transmons) freqs.insert(l.transmon_ghz[t]);
                CHECK(freqs.size() == f.transmons.size());
            }
            CHECK(bulk == (d - 1) * (d - 1));
            CHECK(boundary == 2 * (d - 1));
            // Every data qubit touches two to four ancillas.
            for (int k : degree) {
                CHECK(k >= 2);
                CHECK(k <= 4);
            }
        }
        CHECK_THROWS_AS(build_lattice(spec_of(4)), std::invalid_argument);
        LatticeSpec repeated = spec_of(3);
        repeated.transmon_frequencies_ghz.assign(9, 5.0);
        CHECK_THROWS_AS(build_lattice(repeated), std::invalid_argument);
    }

    TEST_CASE("target lattice is collision free")
    {
        const Lattice l = build_lattice(spec_of(5));
        const auto fl = nominal_transitions(l);
        for (double eps : {100.0, 300.0, 500.0}) CHECK(check_collisions(l, l.transmon_ghz, fl, CollisionBoundTable::defaults(), eps).empty());

        const auto reports = zero_collision_yield(l, {0.0}, CollisionBoundTable::defaults(), {300.0}, {20, 1, 1, 80, 100});
        CHECK(reports[0].yield == 1.0);
        CHECK(reports[0].zero_collision_samples == 20);
    }

    TEST_CASE("individual collision rules")
    {
        const CollisionBoundTable bounds = CollisionBoundTable::defaults();
        const Lattice base = build_lattice(spec_of(3));
        const auto fl = nominal_transitions(base);

        // Two-photon |0> -> |4> condition near 4.93 GHz.
        std::vector<double> wt = base.transmon_ghz;
        wt[4] = 0.5 * fl[0].w04;
        CHECK(fl[0].w04 / 2 == doctest::Approx(4.93).epsilon(0.01));
        const auto c3 = check_collisions(base, wt, fl, bounds, 300.0);
        CHECK(has_type(c3, 3));
        CHECK(std::all_of(c3.begin(), c3.end(), [](const Collision& c) { return c.type == 3 || c.type == 9; }));

        // Three-photon |0> -> |5> condition.
        wt = base.transmon_ghz;
        wt[4] = fl[0].w05 / 3;
        CHECK(has_type(check_collisions(base, wt, fl, bounds, 300.0), 6));
        CHECK_FALSE(has_type(check_collisions(base, wt, fl, bounds, 100.0), 6));  // disabled at 100 MHz

        // Nearly degenerate neighbours on one ancilla.
        LatticeSpec close = spec_of(3);
        close.transmon_frequencies_ghz = base.transmon_ghz;
        close.transmon_frequencies_ghz[1] = close.transmon_frequencies_ghz[0] + 0.010;
        const Lattice l7 = build_lattice(close);
        const auto c7 = check_collisions(l7, l7.transmon_ghz, fl, bounds, 300.0);
        CHECK(has_type(c7, 7));
        CHECK_FALSE(has_type(check_collisions(l7, l7.transmon_ghz, fl, bounds, 100.0), 7));

        // Outside the (w12, w03) band.
        wt = base.transmon_ghz;
        wt[0] = fl[0].w03 + 0.5;
        CHECK(has_type(check_collisions(base, wt, fl, bounds, 300.0), 2));

        CHECK_THROWS_AS(check_collisions(base, wt, fl, bounds, 200.0), std::invalid_argument);
    }

    TEST_CASE("spectator pairs are counted once")
    {
        const CollisionBoundTable bounds = CollisionBoundTable::defaults();
        LatticeSpec s = spec_of(3);
        const Lattice base = build_lattice(s);
        s.transmon_frequencies_ghz = base.transmon_ghz;
        // |w_a - (w_b + delta)| = 0 with delta = -0.3
        s.transmon_frequencies_ghz[1] = s.transmon_frequencies_ghz[0] - 0.3;
        const Lattice l = build_lattice(s);
        const auto fl = nominal_transitions(l);
        const auto c = check_collisions(l, l.transmon_ghz, fl, bounds, 300.0);
        int type8 = 0;
        for (const Collision& x : c)
            if (x.type == 8 && ((x.target == 0 && x.spectator == 1) || (x.target == 1 && x.spectator == 0))) ++type8;
        int shared = 0;
        for (const auto& f : l.fluxonia)
            if (std::count(f.transmons.begin(), f.transmons.end(), 0) && std::count(f.transmons.begin(), f.transmons.end(), 1))
                ++shared;
        CHECK(shared >= 1);
        CHECK(type8 == shared);
    }

    TEST_CASE("disorder streams")
    {
        CHECK(normal_stream(1, 2, 3, 5) == normal_stream(1, 2, 3, 5));
        CHECK(normal_stream(1, 2, 3, 5) != normal_stream(1, 2, 4, 5));
        CHECK(normal_stream(1, 2, 3, 5) != normal_stream(1, 3, 3, 5));
        CHECK(normal_stream(1, 2, 3, 5) != normal_stream(2, 2, 3, 5));

        const Lattice l = build_lattice(spec_of(7));
        const DisorderModel m{0.02, 100, 11};
        std::vector<double> rel_t, rel_ej, rel_el;
        for (std::uint64_t i = 0; i < 500; ++i) {
            const SampledDevice dev = sample_device(l, m, i);
            for (int t = 0; t < l.n_transmons(); ++t) rel_t.push_back(dev.transmon_ghz[t] / l.transmon_ghz[t] - 1.0);
            for (int k = 0; k < l.n_fluxonia(); ++k) {
                rel_ej.push_back(dev.fluxonium_ej_ghz[k] / l.spec.fluxonium.ej_ghz - 1.0);
                rel_el.push_back(dev.fluxonium_el_ghz[k] / l.spec.fluxonium.el_ghz - 1.0);
            }
        }
        auto stddev = [](const std::vector<double>& x) {
            double s = 0.0, s2 = 0.0;
            for (double v : x) {
                s += v;
                s2 += v * v;
            }
            const double n = static_cast<double>(x.size());
            return std::sqrt(s2 / n - (s / n) * (s / n));
        };
        CHECK(stddev(rel_t) == doctest::Approx(0.01).epsilon(0.02));
        CHECK(stddev(rel_ej) == doctest::Approx(0.02).epsilon(0.02));
        CHECK(stddev(rel_el) == doctest::Approx(0.002).epsilon(0.02));

        const SampledDevice a = sample_device(l, m, 7), b = sample_device(l, m, 7);
        CHECK(a.transmon_ghz == b.transmon_ghz);
        CHECK(a.fluxonium_ej_ghz == b.fluxonium_ej_ghz);
        const SampledDevice none = sample_device(l, {0.0, 100, 11}, 3);
        CHECK(none.transmon_ghz == l.transmon_ghz);
    }

    TEST_CASE("yield is independent of the thread count")
    {
        const Lattice l = build_lattice(spec_of(3));
        const CollisionBoundTable bounds = CollisionBoundTable::defaults();
        const auto one = zero_collision_yield(l, {0.02}, bounds, {100.0, 300.0}, {60, 5, 1, 80, 100});
        const auto three = zero_collision_yield(l, {0.02}, bounds, {100.0, 300.0}, {60, 5, 3, 80, 100});
        REQUIRE(one.size() == 2);
        for (size_t i = 0; i < one.size(); ++i) {
            CHECK(one[i].zero_collision_samples == three[i].zero_collision_samples);
            CHECK(one[i].mean_counts == three[i].mean_counts);
            CHECK(one[i].ci_low <= one[i].yield);
            CHECK(one[i].ci_high >= one[i].yield);
        }
        // A stricter rule set can only lower the yield on the same samples.
        CHECK(one[0].eps_d_mhz == 100.0);
    }

    TEST_CASE("Clopper-Pearson interval")
    {
        const auto a = clopper_pearson(0, 10);
        CHECK(a[0] == 0.0);
        CHECK(a[1] == doctest::Approx(1.0 - std::pow(0.025, 0.1)).epsilon(1e-10));
        const auto b = clopper_pearson(10, 10);
        CHECK(b[0] == doctest::Approx(std::pow(0.025, 0.1)).epsilon(1e-10));
        CHECK(b[1] == 1.0);
        const auto c = clopper_pearson(5, 10);
        CHECK(c[0] == doctest::Approx(0.187086).epsilon(1e-5));
        CHECK(c[1] == doctest::Approx(0.812914).epsilon(1e-5));
        CHECK_THROWS_AS(clopper_pearson(11, 10), std::invalid_argument);
    }

    TEST_CASE("basis of 80 resolves the collision transitions")
    {
        // Worst case over a 4-sigma box of the largest disorder studied.
        double worst = 0.0;
        for (double ej_rel : {0.92, 1.0, 1.08})
            for (double el_rel : {0.992, 1.0, 1.008}) {
                FluxoniumParams p = fluxonium_cr_set();
                p.ej_ghz *= ej_rel;
                p.el_ghz *= el_rel;
                p.basis_dim = 80;
                const RealVector a = fluxonium_energies_ghz(p);
                p.basis_dim = 160;
                const RealVector b = fluxonium_energies_ghz(p);
                worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
            }
        MESSAGE("largest level shift between 80 and 160 states: " << worst * 1e6 << " kHz");
        CHECK(worst < 1e-6);
    }
}
