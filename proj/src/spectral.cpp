#include "specavg/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace specavg {

namespace {

// FNV-1a over the raw matrix bytes, only used to tag solver failures.
std::uint64_t matrix_hash(const Matrix& m) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    const std::size_t n = sizeof(Complex) * static_cast<std::size_t>(m.size());
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw std::invalid_argument("HermitianOperator: matrix must be square and nonempty");
    const double scale = m_.cwiseAbs().maxCoeff();
    const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kHermitianTol * std::max(scale, 1e-300) && dev > 0.0)
        throw std::invalid_argument("HermitianOperator: deviation from Hermitian symmetry " +
                                    format_double(dev) + " exceeds tolerance");
    m_ = 0.5 * (m_ + m_.adjoint().eval());
}

HermitianOperator HermitianOperator::identity(Eigen::Index n) {
    return HermitianOperator(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(Eigen::Index n) {
    return HermitianOperator(Matrix::Zero(n, n));
}

OperatorPair::OperatorPair(HermitianOperator a, HermitianOperator b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (a_.dim() != b_.dim()) throw std::invalid_argument("OperatorPair: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(b_.matrix(), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double rad = es.eigenvalues().cwiseAbs().maxCoeff();
    if (lo < -1e-10 * std::max(rad, 1e-300))
        throw std::invalid_argument("OperatorPair: B is not positive semidefinite, min eig = " +
                                    format_double(lo));
}

HermitianOperator OperatorPair::at(double t) const {
    return HermitianOperator(a_.matrix() + t * b_.matrix());
}

EigenDecomposition eigh(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigh: solver did not converge, matrix hash " +
                                 std::to_string(matrix_hash(h.matrix())));
    EigenDecomposition ed{es.eigenvalues(), es.eigenvectors()};
    const double nrm = std::max(ed.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
    const double resid =
        (h.matrix() * ed.eigenvectors - ed.eigenvectors * ed.eigenvalues.asDiagonal())
            .colwise()
            .norm()
            .maxCoeff();
    const double ortho = (ed.eigenvectors.adjoint() * ed.eigenvectors -
                          Matrix::Identity(h.dim(), h.dim()))
                             .norm();
    if (resid > 1e-10 * nrm || ortho > 1e-10)
        throw std::runtime_error("eigh: contract violated, matrix hash " +
                                 std::to_string(matrix_hash(h.matrix())));
    return ed;
}

PointMeasure spectral_measure(const EigenDecomposition& ed, const Vector& phi) {
    if (phi.size() != ed.eigenvectors.rows())
        throw std::invalid_argument("spectral_measure: dimension mismatch");
    std::vector<Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(phi.size()));
    const Vector coeff = ed.eigenvectors.adjoint() * phi;
    for (Eigen::Index i = 0; i < coeff.size(); ++i)
        atoms.push_back({ed.eigenvalues[i], std::norm(coeff[i])});
    return PointMeasure(std::move(atoms));
}

PointMeasure spectral_measure(const HermitianOperator& h, const Vector& phi) {
    return spectral_measure(eigh(h), phi);
}

Vector spectral_projection_apply(const HermitianOperator& h, double a, double b,
                                 const Vector& phi) {
    if (a > b) throw std::invalid_argument("spectral_projection: malformed interval");
    if (phi.size() != h.dim())
        throw std::invalid_argument("spectral_projection: dimension mismatch");
    const EigenDecomposition ed = eigh(h);
    Vector out = Vector::Zero(phi.size());
    for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i) {
        const double lam = ed.eigenvalues[i];
        if (lam >= a && lam <= b) {
            const Complex c = ed.eigenvectors.col(i).dot(phi);
            out += ed.eigenvectors.col(i) * c;
        }
    }
    return out;
}

int cyclicity_rank(const OperatorPair& pair, double rel_tol) {
    const Eigen::Index n = pair.dim();
    // Grow an orthonormal basis of the smallest A-invariant subspace
    // containing Range(B); stop when the span saturates.
    Matrix basis(n, 0);
    Matrix fresh = pair.B().matrix();
    while (fresh.cols() > 0) {
        Matrix cand(n, basis.cols() + fresh.cols());
        cand << basis, fresh;
        Eigen::JacobiSVD<Matrix> svd(cand, Eigen::ComputeThinU);
        const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > rel_tol * smax) ++rank;
        if (rank == basis.cols() || rank == 0) break;
        basis = svd.matrixU().leftCols(rank);
        if (rank == n) break;
        fresh = pair.A().matrix() * basis;
    }
    return static_cast<int>(basis.cols());
}

double range_defect(const HermitianOperator& b, const Vector& phi, double rank_tol) {
    const double nrm = phi.norm();
    if (nrm == 0.0) return 0.0;  // 0 lies in every closed range
    const EigenDecomposition ed = eigh(b);
    const double smax = ed.eigenvalues.cwiseAbs().maxCoeff();
    Vector proj = Vector::Zero(phi.size());
    for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i)
        if (std::abs(ed.eigenvalues[i]) > rank_tol * smax) {
            const Complex c = ed.eigenvectors.col(i).dot(phi);
            proj += ed.eigenvectors.col(i) * c;
        }
    return (phi - proj).norm() / nrm;
}

void save_matrix(const std::filesystem::path& file, const Matrix& m) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("save_matrix: cannot open " + file.string());
    os << m.rows() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
        }
        os << '\n';
    }
}

Matrix load_matrix(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("load_matrix: cannot open " + file.string());
    Eigen::Index n = 0;
    is >> n;
    if (n <= 0) throw std::runtime_error("load_matrix: bad dimension in " + file.string());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            std::string tok;
            is >> tok;
            const auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("load_matrix: malformed entry in " + file.string());
            m(i, j) = Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
    return m;
}

}  // namespace specavg
