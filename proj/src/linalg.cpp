#include "fluxgate/linalg.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "fluxgate/errors.h"

namespace fluxgate {

std::string to_string(Basis b)
{
    switch (b) {
    case Basis::oscillator: return "oscillator";
    case Basis::bare: return "bare";
    case Basis::dressed: return "dressed";
    case Basis::generic: break;
    }
    return "generic";
}

Operator::Operator(Matrix m, Basis basis) : m_(std::move(m)), basis_(basis)
{
    if (m_.rows() != m_.cols())
        throw std::invalid_argument("Operator: matrix must be square");
}

Operator Operator::identity(Index dim, Basis basis) { return {Matrix::Identity(dim, dim), basis}; }
Operator Operator::zero(Index dim, Basis basis) { return {Matrix::Zero(dim, dim), basis}; }

double Operator::hermiticity_defect() const
{
    if (m_.size() == 0) return 0.0;
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double tol) const { return hermiticity_defect() < tol; }

static Basis merged(Basis a, Basis b)
{
    if (a != b && a != Basis::generic && b != Basis::generic)
        throw std::invalid_argument("Operator: basis mismatch (" + to_string(a) + " vs " + to_string(b) + ")");
    return a == Basis::generic ? b : a;
}

Operator Operator::operator+(const Operator& o) const { return {m_ + o.m_, merged(basis_, o.basis_)}; }
Operator Operator::operator-(const Operator& o) const { return {m_ - o.m_, merged(basis_, o.basis_)}; }
Operator Operator::operator*(const Operator& o) const { return {m_ * o.m_, merged(basis_, o.basis_)}; }

Matrix kron(const Matrix& a, const Matrix& b)
{
    const Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    Matrix out(ra * rb, ca * cb);
    for (Index i = 0; i < ra; ++i)
        for (Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

Operator tensor(const Operator& a, const Operator& b)
{
    const Basis basis = a.basis() == b.basis() ? a.basis() : Basis::generic;
    return {kron(a.matrix(), b.matrix()), basis};
}

Eigensystem eig_hermitian(const Matrix& h)
{
    if (h.rows() != h.cols()) throw std::invalid_argument("eig_hermitian: matrix must be square");
    if (h.size() == 0) return {};
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale)
        throw PhysicsError("linalg", "eig_hermitian: input is not Hermitian (max|H - H^dag| = " +
                                         std::to_string(defect) + "); upstream construction is corrupted");
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw PhysicsError("linalg", "eig_hermitian: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigensystem eig_hermitian(const Operator& h) { return eig_hermitian(h.matrix()); }

Matrix expm(const Matrix& a)
{
    if (a.size() == 0) return a;
    return a.exp();
}

Operator expm(const Operator& a) { return {expm(a.matrix()), a.basis()}; }

Matrix sqrtm_normal(const Matrix& a)
{
    const Index n = a.rows();
    if (n == 0) return a;
    const double scale = std::max(1.0, a.norm());
    const double commutator = (a * a.adjoint() - a.adjoint() * a).norm();
    if (commutator > 1e-9 * scale * scale)
        throw PhysicsError("linalg", "sqrtm_normal: input is not normal");
    Eigen::ComplexSchur<Matrix> schur(a);
    const Matrix& t = schur.matrixT();
    const Matrix& u = schur.matrixU();
    Vector root(n);
    for (Index i = 0; i < n; ++i) {
        const cplx lambda = t(i, i);
        if (lambda.real() <= 0.0 && std::abs(lambda.imag()) <= 1e-9 * std::abs(lambda))
            throw PhysicsError("linalg", "sqrtm_normal: eigenvalue on the branch cut (negative real axis)");
        root(i) = std::sqrt(lambda);
    }
    return u * root.asDiagonal() * u.adjoint();
}

RealMatrix lowering(Index n)
{
    RealMatrix a = RealMatrix::Zero(n, n);
    for (Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

Matrix projector(Index dim, const std::vector<Index>& indices)
{
    Matrix p = Matrix::Zero(dim, dim);
    for (Index i : indices) p(i, i) = 1.0;
    return p;
}

} // namespace fluxgate
