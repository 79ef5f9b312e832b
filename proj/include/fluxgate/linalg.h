#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fluxgate {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx I_unit{0.0, 1.0};

enum class Basis { generic, oscillator, bare, dressed };

std::string to_string(Basis b);

// Dense square operator tagged with the basis its entries refer to.
class Operator {
public:
    Operator() = default;
    Operator(Matrix m, Basis basis = Basis::generic);

    static Operator identity(Index dim, Basis basis = Basis::generic);
    static Operator zero(Index dim, Basis basis = Basis::generic);

    Index dim() const { return m_.rows(); }
    Basis basis() const { return basis_; }
    const Matrix& matrix() const { return m_; }
    Matrix& matrix() { return m_; }
    cplx operator()(Index r, Index c) const { return m_(r, c); }

    Operator adjoint() const { return {m_.adjoint(), basis_}; }
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const;

    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator*(const Operator& o) const;
    Operator operator*(cplx s) const { return {m_ * s, basis_}; }
    Operator operator*(double s) const { return {m_ * s, basis_}; }

private:
    Matrix m_;
    Basis basis_ = Basis::generic;
};

// Kronecker product, row-major: index(i_a, i_b) = i_a * dim(b) + i_b.
Matrix kron(const Matrix& a, const Matrix& b);
Operator tensor(const Operator& a, const Operator& b);

struct Eigensystem {
    RealVector energies;  // ascending
    Matrix vectors;       // columns
};

// Throws PhysicsError when the input is not Hermitian to 1e-12 * max(1, max|h|).
Eigensystem eig_hermitian(const Operator& h);
Eigensystem eig_hermitian(const Matrix& h);

Operator expm(const Operator& a);
Matrix expm(const Matrix& a);

// Principal square root of a normal matrix (Hermitian or unitary) from its
// Schur form. Throws if the input is not normal or has an eigenvalue on the
// closed negative real axis.
Matrix sqrtm_normal(const Matrix& a);

// Truncated bosonic lowering operator on n levels.
RealMatrix lowering(Index n);

// Sum of |i><i| over the listed indices.
Matrix projector(Index dim, const std::vector<Index>& indices);

} // namespace fluxgate
