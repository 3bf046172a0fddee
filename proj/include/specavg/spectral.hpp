#pragma once

#include <Eigen/Dense>
#include <complex>
#include <filesystem>

#include "specavg/measure.hpp"

namespace specavg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Dense Hermitian matrix. Construction symmetrizes and rejects inputs whose
// deviation from the conjugate transpose exceeds 1e-12 of the largest entry.
class HermitianOperator {
public:
    static constexpr double kHermitianTol = 1e-12;

    explicit HermitianOperator(Matrix m);

    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    static HermitianOperator identity(Eigen::Index n);
    static HermitianOperator zero(Eigen::Index n);

private:
    Matrix m_;
};

// H(t) = A + t B with B positive semidefinite.
class OperatorPair {
public:
    OperatorPair(HermitianOperator a, HermitianOperator b);

    const HermitianOperator& A() const { return a_; }
    const HermitianOperator& B() const { return b_; }
    Eigen::Index dim() const { return a_.dim(); }

    HermitianOperator at(double t) const;  // A + t B

private:
    HermitianOperator a_;
    HermitianOperator b_;
};

struct EigenDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // orthonormal columns
};

// Dense Hermitian eigendecomposition with a verified contract:
// residual <= 1e-10 * ||H|| and orthonormality defect <= 1e-10.
EigenDecomposition eigh(const HermitianOperator& h);

// rho_H^Phi: atoms at eigenvalues with weights |<psi_i, Phi>|^2, degenerate
// eigenvalues merged; total mass ||Phi||^2.
PointMeasure spectral_measure(const HermitianOperator& h, const Vector& phi);
PointMeasure spectral_measure(const EigenDecomposition& ed, const Vector& phi);

// E_H([a,b]) Phi; closed interval, idempotent.
Vector spectral_projection_apply(const HermitianOperator& h, double a, double b,
                                 const Vector& phi);

// Numerical rank of span{A^k B e_j : 0 <= k < n}; equals n iff the
// finite-dimensional cyclicity hypothesis closure{phi(A) B f} = H holds,
// since polynomials exhaust the functional calculus on a finite spectrum.
int cyclicity_rank(const OperatorPair& pair, double rel_tol = 1e-10);

// Relative distance of phi from Range(B) (projection defect), used to warn
// on averaging runs that violate the Range(B) hypothesis.
double range_defect(const HermitianOperator& b, const Vector& phi, double rank_tol = 1e-10);

// Plain-text matrix fixture format: first line "n", then n rows of n
// whitespace-separated "re,im" pairs.
void save_matrix(const std::filesystem::path& file, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& file);

}  // namespace specavg
