#include "fluxgate/dynamics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Eigenvalues>

#include "fluxgate/errors.h"
#include "fluxgate/parallel.h"

namespace fluxgate {

namespace odeint = boost::numeric::odeint;

Matrix TimeDependentHamiltonian::at(double t) const
{
    Matrix h = h0;
    for (const Term& term : terms) h += term.coefficient(t) * term.op;
    return h;
}

void Dissipator::add(const SparseJump& j)
{
    for (const auto& a : j.entries)
        for (const auto& b : j.entries)
            if (a.row == b.row) decay(a.col, b.col) += a.value * b.value;
    jumps.push_back(j);
}

Dissipator make_dissipator(Index dim)
{
    Dissipator d;
    d.dim = dim;
    d.decay = Matrix::Zero(dim, dim);
    return d;
}

void add_embedded_jumps(Dissipator& d, const JumpOperatorSet& set, int position, const std::vector<int>& dims)
{
    if (position < 0 || position >= static_cast<int>(dims.size()) || dims[position] != set.dim)
        throw std::invalid_argument("add_embedded_jumps: factor dimension mismatch");
    Index left = 1, right = 1;
    for (int i = 0; i < position; ++i) left *= dims[i];
    for (size_t i = position + 1; i < dims.size(); ++i) right *= dims[i];
    const Index n = set.dim;
    if (left * n * right != d.dim) throw std::invalid_argument("add_embedded_jumps: total dimension mismatch");

    for (const Jump& j : set.jumps) {
        if (j.rate_per_us <= 0.0) continue;
        const double amp = std::sqrt(j.rate_per_us * 1e-3);
        SparseJump sj;
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < n; ++c) {
                if (j.op(r, c) == 0.0) continue;
                for (Index a = 0; a < left; ++a)
                    for (Index b = 0; b < right; ++b)
                        sj.entries.push_back({(a * n + r) * right + b, (a * n + c) * right + b, amp * j.op(r, c)});
            }
        d.add(sj);
    }
}

namespace {

using State = std::vector<double>;

constexpr double min_rtol = 1e-14;

Eigen::Map<const Matrix> view(const State& x, Index rows, Index cols)
{
    return {reinterpret_cast<const cplx*>(x.data()), rows, cols};
}

Eigen::Map<Matrix> view(State& x, Index rows, Index cols) { return {reinterpret_cast<cplx*>(x.data()), rows, cols}; }

State pack(const Matrix& m)
{
    State s(static_cast<size_t>(2 * m.size()));
    view(s, m.rows(), m.cols()) = m;
    return s;
}

std::vector<double> segment_times(const TimeDependentHamiltonian& h, double t0, double t1)
{
    std::vector<double> times{t0};
    std::vector<double> bp = h.breakpoints;
    std::sort(bp.begin(), bp.end());
    for (double b : bp)
        if (b > times.back() + 1e-12 && b < t1 - 1e-12) times.push_back(b);
    times.push_back(t1);
    return times;
}

template <class Rhs>
void integrate(Rhs&& rhs, State& y, const std::vector<double>& times, const PropagationOptions& opt)
{
    if (opt.fixed_step_ns > 0.0) {
        odeint::runge_kutta4<State> stepper;
        for (size_t s = 0; s + 1 < times.size(); ++s) {
            const double a = times[s], b = times[s + 1];
            const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / opt.fixed_step_ns - 1e-9)));
            const double dt = (b - a) / static_cast<double>(n);
            for (long i = 0; i < n; ++i) stepper.do_step(rhs, y, a + i * dt, dt);
        }
        return;
    }

    auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_fehlberg78<State>());
    double dt = opt.initial_step_ns;
    long steps = 0;
    for (size_t s = 0; s + 1 < times.size(); ++s) {
        double t = times[s];
        const double end = times[s + 1];
        while (t < end) {
            const bool clipped = t + dt > end;
            double step = clipped ? end - t : dt;
            if (stepper.try_step(rhs, y, t, step) == odeint::success) {
                dt = clipped ? std::max(dt, step) : step;
                if (end - t < 1e-12 * std::max(1.0, std::abs(end))) t = end;
            } else {
                dt = step;
            }
            if (++steps > opt.max_steps) {
                std::ostringstream os;
                os << "step cap of " << opt.max_steps << " reached at t = " << t << " ns of " << times.back()
                   << " ns (last step " << dt << " ns, rtol " << opt.rtol << ")";
                throw PhysicsError("dynamics", os.str());
            }
            if (!(dt > 1e-14)) throw PhysicsError("dynamics", "step size underflow at t = " + std::to_string(t));
        }
    }
}

} // namespace

Matrix propagate_states(const TimeDependentHamiltonian& h, const Matrix& psi0, double t0, double t1,
                        const PropagationOptions& opt)
{
    const Index n = h.dim(), k = psi0.cols();
    if (psi0.rows() != n) throw std::invalid_argument("propagate_states: dimension mismatch");
    if (t1 <= t0) return psi0;
    Matrix ht(n, n);
    auto rhs = [&](const State& x, State& dx, double t) {
        ht = h.at(t);
        view(dx, n, k).noalias() = -I_unit * (ht * view(x, n, k));
    };
    const Matrix gram0 = psi0.adjoint() * psi0;
    PropagationOptions o = opt;
    for (;;) {
        State y = pack(psi0);
        integrate(rhs, y, segment_times(h, t0, t1), o);
        Matrix psi = view(y, n, k);
        // Global error accumulates over many steps; tighten until the Gram
        // matrix is preserved to norm_tol.
        const double drift = (psi.adjoint() * psi - gram0).cwiseAbs().maxCoeff();
        if (!(opt.norm_tol > 0.0) || drift <= opt.norm_tol || o.fixed_step_ns > 0.0) return psi;
        if (o.rtol <= min_rtol) {
            std::ostringstream os;
            os << "norm drift " << drift << " exceeds " << opt.norm_tol << " at rtol " << o.rtol;
            throw PhysicsError("dynamics", os.str());
        }
        const double scale = std::clamp(0.2 * opt.norm_tol / drift, 1e-4, 0.1);
        o.rtol = std::max(min_rtol, o.rtol * scale);
        o.atol = std::max(1e-16, o.atol * scale);
    }
}

Matrix propagate_unitary(const TimeDependentHamiltonian& h, double t0, double t1, const PropagationOptions& opt)
{
    return propagate_states(h, Matrix::Identity(h.dim(), h.dim()), t0, t1, opt);
}

Matrix propagate_lindblad(const TimeDependentHamiltonian& h, const Dissipator& d, const Matrix& rho0, double t0,
                          double t1, const PropagationOptions& opt)
{
    const Index n = h.dim();
    if (rho0.rows() != n || rho0.cols() != n) throw std::invalid_argument("propagate_lindblad: dimension mismatch");
    if (!d.empty() && d.dim != n) throw std::invalid_argument("propagate_lindblad: dissipator dimension mismatch");
    if (t1 <= t0) return rho0;

    TimeDependentHamiltonian heff = h;
    if (!d.empty()) heff.h0 -= 0.5 * I_unit * d.decay;

    State y = pack(rho0);
    Matrix ht(n, n), a(n, n);
    auto rhs = [&](const State& x, State& dx, double t) {
        const auto rho = view(x, n, n);
        auto out = view(dx, n, n);
        ht = heff.at(t);
        a.noalias() = ht * rho;
        // rho is Hermitian, so rho H_eff^dag = (H_eff rho)^dag.
        out = -I_unit * (a - a.adjoint());
        for (const SparseJump& j : d.jumps)
            for (const auto& p : j.entries)
                for (const auto& q : j.entries) out(p.row, q.row) += p.value * q.value * rho(p.col, q.col);
    };
    integrate(rhs, y, segment_times(h, t0, t1), opt);
    Matrix rho = view(y, n, n);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    // Runge-Kutta steps keep linear invariants, so only roundoff can move the trace.
    const double trace_drift = std::abs(rho.trace() - rho0.trace());
    if (trace_drift > 1e-9)
        throw PhysicsError("dynamics", "trace drifted by " + std::to_string(trace_drift));

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    const double lowest = es.eigenvalues().minCoeff();
    if (lowest < -1e-8)
        throw PhysicsError("dynamics", "density matrix lost positivity (min eigenvalue " + std::to_string(lowest) +
                                           "); tighten the integration tolerance");
    return rho;
}

std::vector<Matrix> evolve_channel(const TimeDependentHamiltonian& h, const Dissipator& d, double t0, double t1,
                                   const std::vector<Matrix>& inputs, const PropagationOptions& opt, unsigned threads)
{
    std::vector<Matrix> out(inputs.size());
    parallel_for(inputs.size(), threads, [&](size_t i) { out[i] = propagate_lindblad(h, d, inputs[i], t0, t1, opt); });
    return out;
}

unsigned default_thread_count()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

} // namespace fluxgate
