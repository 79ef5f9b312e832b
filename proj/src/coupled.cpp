#include "fluxgate/coupled.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "fluxgate/errors.h"

namespace fluxgate {

std::string to_string(const Label& l, bool with_spectator)
{
    std::ostringstream os;
    os << '|' << l.t << l.f;
    if (with_spectator) os << l.s;
    os << '>';
    return os.str();
}

Index DressedSpectrum::index_of(const Label& l) const
{
    const auto it = std::find(labels.begin(), labels.end(), l);
    if (it == labels.end()) throw std::out_of_range("dressed label " + to_string(l, true) + " not found");
    return static_cast<Index>(it - labels.begin());
}

struct CoupledSystem::Cache {
    std::once_flag once;
    std::optional<DressedSpectrum> dressed;
};

CoupledSystem::CoupledSystem(TransmonParams transmon, FluxoniumParams fluxonium, double jc_ghz,
                             ConvergenceCheck check)
    : CoupledSystem(transmon, fluxonium_eigensystem(fluxonium, check), jc_ghz)
{
}

CoupledSystem::CoupledSystem(TransmonParams transmon, FluxoniumSpectrum spectrum, double jc_ghz)
    : transmon_(transmon),
      fluxonium_(std::make_shared<const FluxoniumSpectrum>(std::move(spectrum))),
      jc_ghz_(jc_ghz),
      cache_(std::make_shared<Cache>())
{
    transmon_.validate();
}

CoupledSystem CoupledSystem::with_spectator(TransmonParams spectator, double jc_spectator_ghz) const
{
    spectator.validate();
    CoupledSystem out = *this;
    out.spectator_ = spectator;
    out.jc_spectator_ghz_ = jc_spectator_ghz;
    out.cache_ = std::make_shared<Cache>();
    return out;
}

CoupledSystem CoupledSystem::with_coupling(double jc_ghz) const
{
    CoupledSystem out = *this;
    out.jc_ghz_ = jc_ghz;
    out.cache_ = std::make_shared<Cache>();
    return out;
}

CoupledSystem CoupledSystem::with_transmon(TransmonParams transmon) const
{
    transmon.validate();
    CoupledSystem out = *this;
    out.transmon_ = transmon;
    out.cache_ = std::make_shared<Cache>();
    return out;
}

Index CoupledSystem::bare_index(const Label& l) const
{
    if (l.t < 0 || l.t >= nt() || l.f < 0 || l.f >= nf() || l.s < 0 || l.s >= ns())
        throw std::out_of_range("bare label " + to_string(l, true) + " outside the truncation");
    return (static_cast<Index>(l.t) * nf() + l.f) * ns() + l.s;
}

Label CoupledSystem::bare_label(Index i) const
{
    const int s = static_cast<int>(i % ns());
    const Index tf = i / ns();
    return {static_cast<int>(tf / nf()), static_cast<int>(tf % nf()), s};
}

namespace {

Matrix embed3(const Matrix& a, const Matrix& b, const Matrix& c) { return kron(kron(a, b), c); }

} // namespace

double CoupledSystem::bare_energy(const Label& l) const
{
    auto duffing = [](const TransmonParams& p, int k) {
        return ghz_to_rad(p.omega_ghz * k + 0.5 * p.delta_ghz * k * (k - 1));
    };
    double e = duffing(transmon_, l.t) + ghz_to_rad(fluxonium_->energies_ghz(l.f));
    if (spectator_) e += duffing(*spectator_, l.s);
    return e;
}

Operator CoupledSystem::bare_hamiltonian() const
{
    Matrix h = Matrix::Zero(dim(), dim());
    for (Index i = 0; i < dim(); ++i) h(i, i) = bare_energy(bare_label(i));
    return {h, Basis::bare};
}

Operator CoupledSystem::transmon_charge() const
{
    const Matrix qt = transmon_charge_operator(transmon_).matrix();
    return {embed3(qt, Matrix::Identity(nf(), nf()), Matrix::Identity(ns(), ns())), Basis::bare};
}

Operator CoupledSystem::fluxonium_charge() const
{
    const Matrix qf = fluxonium_->charge_operator().matrix();
    return {embed3(Matrix::Identity(nt(), nt()), qf, Matrix::Identity(ns(), ns())), Basis::bare};
}

Operator CoupledSystem::coupling_hamiltonian() const
{
    const Matrix qt = transmon_charge_operator(transmon_).matrix();
    const Matrix qf = fluxonium_->charge_operator().matrix();
    Matrix v = ghz_to_rad(jc_ghz_) * embed3(qt, qf, Matrix::Identity(ns(), ns()));
    if (spectator_) {
        const Matrix qs = transmon_charge_operator(*spectator_).matrix();
        v += ghz_to_rad(jc_spectator_ghz_) * embed3(Matrix::Identity(nt(), nt()), qf, qs);
    }
    return {v, Basis::bare};
}

Operator CoupledSystem::hamiltonian() const { return bare_hamiltonian() + coupling_hamiltonian(); }

Operator build_hamiltonian(const CoupledSystem& s) { return s.hamiltonian(); }

DressedSpectrum dressed_states(const CoupledSystem& s)
{
    const Eigensystem es = eig_hermitian(s.hamiltonian());
    const Index n = s.dim();

    DressedSpectrum d;
    d.energies = es.energies;
    d.vectors = es.vectors;
    d.overlaps = es.vectors.cwiseAbs2();

    struct Candidate {
        double overlap;
        Index bare;
        Index dressed;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<size_t>(n * n));
    for (Index b = 0; b < n; ++b)
        for (Index i = 0; i < n; ++i) candidates.push_back({d.overlaps(b, i), b, i});
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.overlap > y.overlap; });

    std::vector<Index> bare_of(static_cast<size_t>(n), -1);
    std::vector<bool> bare_used(static_cast<size_t>(n), false);
    Index assigned = 0;
    for (const Candidate& c : candidates) {
        if (assigned == n) break;
        if (bare_used[c.bare] || bare_of[c.dressed] >= 0) continue;
        if (c.overlap > 1e-3) {
            for (Index j = 0; j < n; ++j) {
                if (j == c.dressed || bare_of[j] >= 0) continue;
                if (std::abs(d.overlaps(c.bare, j) - c.overlap) < 1e-6)
                    throw PhysicsError("coupled_system", "ambiguous labeling: dressed states " + std::to_string(c.dressed) +
                                                             " and " + std::to_string(j) + " both claim " +
                                                             to_string(s.bare_label(c.bare), s.spectator().has_value()));
            }
        }
        bare_of[c.dressed] = c.bare;
        bare_used[c.bare] = true;
        ++assigned;
    }

    d.labels.resize(static_cast<size_t>(n));
    d.assignment_quality = 1.0;
    for (Index i = 0; i < n; ++i) {
        const Index b = bare_of[i];
        d.labels[i] = s.bare_label(b);
        d.assignment_quality = std::min(d.assignment_quality, d.overlaps(b, i));
        const cplx c = d.vectors(b, i);
        if (std::abs(c) > 0.0) d.vectors.col(i) *= std::conj(c) / std::abs(c);
    }
    return d;
}

const DressedSpectrum& CoupledSystem::dressed() const
{
    std::call_once(cache_->once, [this] { cache_->dressed = dressed_states(*this); });
    return *cache_->dressed;
}

Frequency zz_coupling(const CoupledSystem& s)
{
    const DressedSpectrum& d = s.dressed();
    return Frequency::from_rad(d.energy({1, 1}) - d.energy({1, 0}) - d.energy({0, 1}) + d.energy({0, 0}));
}

Frequency delta_shift(const CoupledSystem& s)
{
    const DressedSpectrum& d = s.dressed();
    const Index i13 = d.index_of({1, 3});
    const Index i04 = d.index_of({0, 4});
    const double base = -d.energy({1, 0}) - d.energy({0, 3}) + d.energy({0, 0});
    const double q13 = d.overlaps(s.bare_index({1, 3}), i13);
    const double q04 = d.overlaps(s.bare_index({0, 4}), i04);
    if (q13 < 0.5 || q04 < 0.5) {
        std::ostringstream os;
        os << "|13>/|04> hybridized (overlaps " << q13 << ", " << q04 << "); candidate Delta/2pi = "
           << rad_to_mhz(d.energies(i13) + base) << " MHz (as labeled) or " << rad_to_mhz(d.energies(i04) + base)
           << " MHz (swapped)";
        throw PhysicsError("coupled_system", os.str());
    }
    return Frequency::from_rad(d.energies(i13) + base);
}

cplx dressed_matrix_element(const CoupledSystem& s, const Operator& op, const Label& bra, const Label& ket)
{
    if (op.dim() != s.dim()) throw std::invalid_argument("dressed_matrix_element: operator dimension mismatch");
    const DressedSpectrum& d = s.dressed();
    const auto vb = d.vectors.col(d.index_of(bra));
    const auto vk = d.vectors.col(d.index_of(ket));
    return vb.dot(op.matrix() * vk);
}

} // namespace fluxgate
