#include "fluxgate/yield.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

#include "fluxgate/errors.h"
#include "fluxgate/parallel.h"

namespace fluxgate {

void LatticeSpec::validate() const
{
    if (distance < 3 || distance % 2 == 0) throw std::invalid_argument("lattice: distance must be odd and >= 3");
    if (!transmon_frequencies_ghz.empty() &&
        transmon_frequencies_ghz.size() != static_cast<size_t>(distance * distance))
        throw std::invalid_argument("lattice: explicit transmon frequencies need distance^2 entries");
    fluxonium.validate();
}

Lattice build_lattice(const LatticeSpec& spec)
{
    spec.validate();
    const int d = spec.distance;
    Lattice l;
    l.spec = spec;
    l.transmon_ghz.resize(static_cast<size_t>(d * d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            l.transmon_ghz[r * d + c] = spec.transmon_frequencies_ghz.empty()
                                            ? spec.palette_ghz[(r % 2) * 2 + (c % 2)]
                                            : spec.transmon_frequencies_ghz[r * d + c];

    // Plaquette (r, c) sits at (r + 1/2, c + 1/2) for r, c in [-1, d-1]. Bulk
    // plaquettes are all kept; boundary ones alternate so that top/bottom and
    // left/right carry opposite checkerboard parity.
    for (int r = -1; r < d; ++r)
        for (int c = -1; c < d; ++c) {
            const bool top_bottom = (r == -1 || r == d - 1), left_right = (c == -1 || c == d - 1);
            if (top_bottom && left_right) continue;
            const bool even = ((r + c) % 2 + 2) % 2 == 0;
            if (top_bottom && !even) continue;
            if (left_right && even) continue;
            Lattice::Fluxonium f;
            f.row = r + 0.5;
            f.col = c + 0.5;
            for (int dr = 0; dr <= 1; ++dr)
                for (int dc = 0; dc <= 1; ++dc) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < d && cc >= 0 && cc < d) f.transmons.push_back(rr * d + cc);
                }
            std::set<double> freqs;
            for (int t : f.transmons) freqs.insert(l.transmon_ghz[t]);
            if (freqs.size() != f.transmons.size()) {
                std::ostringstream os;
                os << "lattice: transmons around the fluxonium at (" << f.row << ", " << f.col
                   << ") share a target frequency";
                throw std::invalid_argument(os.str());
            }
            l.fluxonia.push_back(std::move(f));
        }
    return l;
}

void DisorderModel::validate() const
{
    if (!(sigma_r_over_r >= 0.0)) throw std::invalid_argument("disorder: sigma_R/R must be nonnegative");
    if (n_junctions < 1) throw std::invalid_argument("disorder: n_junctions must be positive");
}

double DisorderModel::sigma_el_rel() const { return sigma_r_over_r / std::sqrt(static_cast<double>(n_junctions)); }

namespace {

std::mt19937_64 node_engine(std::uint64_t seed, std::uint64_t sample, std::uint64_t node)
{
    auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
    auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(sample), hi(sample), lo(node), hi(node)};
    return std::mt19937_64(seq);
}

double positive_draw(std::mt19937_64& eng, std::normal_distribution<double>& z, double mean, double rel_sigma,
                     const char* what)
{
    for (int attempt = 0; attempt <= 100; ++attempt) {
        const double x = mean * (1.0 + rel_sigma * z(eng));
        if (x > 0.0) return x;
    }
    throw PhysicsError("yield", std::string("could not draw a positive ") + what + " in 100 retries");
}

} // namespace

std::vector<double> normal_stream(std::uint64_t seed, std::uint64_t sample, std::uint64_t node, int count)
{
    auto eng = node_engine(seed, sample, node);
    std::normal_distribution<double> z;
    std::vector<double> out(static_cast<size_t>(std::max(count, 0)));
    for (double& x : out) x = z(eng);
    return out;
}

SampledDevice sample_device(const Lattice& lattice, const DisorderModel& disorder, std::uint64_t sample_index)
{
    disorder.validate();
    SampledDevice dev;
    const int nt = lattice.n_transmons();
    for (int i = 0; i < nt; ++i) {
        auto eng = node_engine(disorder.seed, sample_index, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> z;
        dev.transmon_ghz.push_back(
            positive_draw(eng, z, lattice.transmon_ghz[i], disorder.sigma_omega_rel(), "transmon frequency"));
    }
    const FluxoniumParams& target = lattice.spec.fluxonium;
    for (int k = 0; k < lattice.n_fluxonia(); ++k) {
        auto eng = node_engine(disorder.seed, sample_index, static_cast<std::uint64_t>(nt + k));
        std::normal_distribution<double> z;
        dev.fluxonium_ej_ghz.push_back(positive_draw(eng, z, target.ej_ghz, disorder.sigma_ej_rel(), "E_J"));
        dev.fluxonium_el_ghz.push_back(positive_draw(eng, z, target.el_ghz, disorder.sigma_el_rel(), "E_L"));
    }
    return dev;
}

CollisionBoundTable CollisionBoundTable::defaults()
{
    auto w = [](double mhz) { return Bound{BoundKind::window, mhz}; };
    const Bound off{BoundKind::disabled, 0.0}, region{BoundKind::region, 0.0}, merged{BoundKind::merged, 0.0};
    CollisionBoundTable t;
    t.bounds[0] = {w(100), w(100), w(100)};
    t.bounds[1] = {region, region, region};
    t.bounds[2] = {w(15), w(40), w(60)};
    t.bounds[3] = {w(5), w(40), w(50)};
    t.bounds[4] = {w(9), merged, merged};
    t.bounds[5] = {off, w(17), w(35)};
    t.bounds[6] = {w(5), w(15), w(15)};
    t.bounds[7] = {w(7), w(20), w(20)};
    t.bounds[8] = {w(10), w(25), w(50)};
    return t;
}

int CollisionBoundTable::column(double eps) const
{
    for (size_t i = 0; i < eps_d_mhz.size(); ++i)
        if (std::abs(eps_d_mhz[i] - eps) < 1e-9) return static_cast<int>(i);
    throw std::invalid_argument("collision bounds: no column for eps_d = " + std::to_string(eps) + " MHz");
}

FluxoniumTransitions transitions_of(const RealVector& e)
{
    if (e.size() < 6) throw std::invalid_argument("transitions_of: need six fluxonium levels");
    return {e(2) - e(1), e(3) - e(0), e(4) - e(0), e(5) - e(1), e(5) - e(0)};
}

std::vector<Collision> check_collisions(const Lattice& lattice, const std::vector<double>& wt,
                                        const std::vector<FluxoniumTransitions>& fl,
                                        const CollisionBoundTable& bounds, double eps)
{
    if (wt.size() != lattice.transmon_ghz.size() || fl.size() != lattice.fluxonia.size())
        throw std::invalid_argument("check_collisions: sample does not match the lattice");
    const int col = bounds.column(eps);
    const double delta = lattice.spec.transmon_delta_ghz;
    // Windows are on omega / 2pi, in MHz.
    auto hit = [&](int type, double detuning_ghz) {
        const Bound& b = bounds.bounds[type - 1][col];
        return b.kind == BoundKind::window && std::abs(detuning_ghz) * 1e3 < b.half_width_mhz;
    };

    std::vector<Collision> out;
    for (int k = 0; k < lattice.n_fluxonia(); ++k) {
        const auto& f = fl[k];
        const auto& around = lattice.fluxonia[k].transmons;
        for (int t : around) {
            const double w = wt[t];
            if (hit(1, w - f.w12) || hit(1, w - f.w03)) out.push_back({1, k, t});
            if (bounds.bounds[1][col].kind == BoundKind::region && !(w > f.w12 && w < f.w03)) out.push_back({2, k, t});
            if (hit(3, 2 * w - f.w04)) out.push_back({3, k, t});
            if (hit(4, 2 * w - f.w15)) out.push_back({4, k, t});
            if (hit(5, 2 * w - (w + delta + f.w03))) out.push_back({5, k, t});
            if (hit(6, 3 * w - f.w05)) out.push_back({6, k, t});
        }
        // Spectators: unordered pairs on the same fluxonium, a type counted once
        // if either role assignment collides.
        for (size_t a = 0; a < around.size(); ++a)
            for (size_t b = a + 1; b < around.size(); ++b) {
                const int ta = around[a], tb = around[b];
                const double wa = wt[ta], wb = wt[tb];
                if (hit(7, wa - wb)) out.push_back({7, k, ta, tb});
                if (hit(8, wa - (wb + delta)))
                    out.push_back({8, k, ta, tb});
                else if (hit(8, wb - (wa + delta)))
                    out.push_back({8, k, tb, ta});
                if (hit(9, wa + wb - f.w04)) out.push_back({9, k, ta, tb});
            }
    }
    return out;
}

std::array<double, 2> clopper_pearson(int x, int n, double confidence)
{
    if (n <= 0 || x < 0 || x > n) throw std::invalid_argument("clopper_pearson: bad counts");
    const double alpha = 1.0 - confidence;
    using boost::math::beta_distribution;
    const double lo = x == 0 ? 0.0 : boost::math::quantile(beta_distribution<>(x, n - x + 1), alpha / 2);
    const double hi = x == n ? 1.0 : boost::math::quantile(beta_distribution<>(x + 1, n - x), 1 - alpha / 2);
    return {lo, hi};
}

std::vector<YieldReport> zero_collision_yield(const Lattice& lattice, const std::vector<double>& sigma_grid,
                                              const CollisionBoundTable& bounds, const std::vector<double>& eps_list,
                                              const YieldOptions& opt)
{
    if (opt.n_samples < 1) throw std::invalid_argument("yield: n_samples must be positive");
    for (double e : eps_list) bounds.column(e);

    std::vector<YieldReport> reports;
    const size_t ne = eps_list.size(), ns = static_cast<size_t>(opt.n_samples);
    for (double sigma : sigma_grid) {
        DisorderModel disorder{sigma, opt.n_junctions, opt.seed};
        disorder.validate();
        // counts[sample][eps][type]
        std::vector<std::vector<std::array<int, 9>>> counts(ns, std::vector<std::array<int, 9>>(ne));
        parallel_for(ns, opt.threads, [&](size_t i) {
            const SampledDevice dev = sample_device(lattice, disorder, i);
            std::map<std::pair<double, double>, FluxoniumTransitions> cache;
            std::vector<FluxoniumTransitions> fl;
            for (int k = 0; k < lattice.n_fluxonia(); ++k) {
                const std::pair<double, double> key{dev.fluxonium_ej_ghz[k], dev.fluxonium_el_ghz[k]};
                auto it = cache.find(key);
                if (it == cache.end()) {
                    FluxoniumParams p = lattice.spec.fluxonium;
                    p.ej_ghz = key.first;
                    p.el_ghz = key.second;
                    p.basis_dim = opt.basis_dim;
                    p.n_levels = 6;
                    it = cache.emplace(key, transitions_of(fluxonium_energies_ghz(p))).first;
                }
                fl.push_back(it->second);
            }
            for (size_t e = 0; e < ne; ++e) {
                auto& c = counts[i][e];
                c.fill(0);
                for (const Collision& hit : check_collisions(lattice, dev.transmon_ghz, fl, bounds, eps_list[e]))
                    ++c[hit.type - 1];
            }
        });

        for (size_t e = 0; e < ne; ++e) {
            YieldReport r;
            r.sigma_r_over_r = sigma;
            r.distance = lattice.spec.distance;
            r.eps_d_mhz = eps_list[e];
            r.n_samples = opt.n_samples;
            for (size_t i = 0; i < ns; ++i) {
                int total = 0;
                for (int t = 0; t < 9; ++t) {
                    r.mean_counts[t] += counts[i][e][t];
                    total += counts[i][e][t];
                }
                if (total == 0) ++r.zero_collision_samples;
            }
            for (double& m : r.mean_counts) m /= static_cast<double>(ns);
            r.yield = static_cast<double>(r.zero_collision_samples) / static_cast<double>(ns);
            const auto ci = clopper_pearson(r.zero_collision_samples, opt.n_samples);
            r.ci_low = ci[0];
            r.ci_high = ci[1];
            reports.push_back(r);
        }
    }
    return reports;
}

} // namespace fluxgate
