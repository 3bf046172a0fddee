#include "specavg/commutator.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace specavg {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridDiscretization::GridDiscretization(int n_points, double half_length)
    : n_(n_points), l_(half_length) {
    if (!is_power_of_two(n_) || n_ < 16)
        throw std::invalid_argument("GridDiscretization: N must be a power of two >= 16");
    if (l_ <= 0.0) throw std::invalid_argument("GridDiscretization: L must be positive");

    const double dx = spacing();
    x_.resize(static_cast<std::size_t>(n_));
    p_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) x_[static_cast<std::size_t>(i)] = -l_ + dx * i;
    for (int k = 0; k < n_; ++k)
        p_[static_cast<std::size_t>(k)] = std::numbers::pi * (k - n_ / 2) / l_;

    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x_.data(), n_);
    q_ = xv.cast<Complex>().asDiagonal();
    t_ = xv.array().tanh().matrix().cast<Complex>().asDiagonal();

    // plane-wave basis E(j,k) = exp(i p_k x_j) / sqrt(N); unitary on the grid
    Matrix basis(n_, n_);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_));
    for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k)
            basis(j, k) = std::polar(norm, p_[static_cast<std::size_t>(k)] *
                                               x_[static_cast<std::size_t>(j)]);
    Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p_.data(), n_);
    pm_ = basis * pv.cast<Complex>().asDiagonal() * basis.adjoint();
    d_ = basis * pv.array().atan().matrix().cast<Complex>().asDiagonal() * basis.adjoint();
    pm_ = 0.5 * (pm_ + pm_.adjoint().eval());
    d_ = 0.5 * (d_ + d_.adjoint().eval());
}

GridDiscretization build_grid(int n_points, double half_length) {
    return GridDiscretization(n_points, half_length);
}

HermitianOperator matrix_commutator(const Matrix& x, const Matrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
        throw std::invalid_argument("matrix_commutator: shape mismatch");
    Matrix c = Complex(0.0, 1.0) * (x * y - y * x);
    c = 0.5 * (c + c.adjoint().eval());
    return HermitianOperator(std::move(c));
}

HermitianOperator howland_commutator(const GridDiscretization& grid) {
    const auto& x = grid.positions();
    const int n = grid.n_points();
    const double dx = grid.spacing();
    Matrix c(n, n);
    for (int i = 0; i < n; ++i) {
        const double xi = x[static_cast<std::size_t>(i)];
        for (int j = 0; j <= i; ++j) {
            const double xj = x[static_cast<std::size_t>(j)];
            double v;
            if (i == j) {
                const double s = 1.0 / std::cosh(xi);
                v = 0.5 * s * s;
            } else {
                const double u = xi - xj;
                v = 0.5 * std::exp(-std::abs(u)) * (std::tanh(xi) - std::tanh(xj)) / u;
            }
            c(i, j) = c(j, i) = dx * v;
        }
    }
    return HermitianOperator(std::move(c));
}

HermitianOperator block_direct_integral(const FiberFamily& family) {
    if (family.fibers.empty())
        throw std::invalid_argument("block_direct_integral: empty family");
    if (family.fibers.size() != family.weights.size())
        throw std::invalid_argument("block_direct_integral: weights/fibers mismatch");
    const Eigen::Index n = family.fibers.front().dim();
    for (const auto& f : family.fibers)
        if (f.dim() != n)
            throw std::invalid_argument("block_direct_integral: inconsistent fiber dimensions");
    const auto j_count = static_cast<Eigen::Index>(family.fibers.size());
    Matrix block = Matrix::Zero(n * j_count, n * j_count);
    for (Eigen::Index j = 0; j < j_count; ++j)
        block.block(j * n, j * n, n, n) = family.fibers[static_cast<std::size_t>(j)].matrix();
    return HermitianOperator(std::move(block));
}

double decomposition_identity_check(const FiberFamily& family, const Vector& f, double a,
                                    double b) {
    if (family.fibers.size() != family.weights.size())
        throw std::invalid_argument("decomposition_identity_check: weights/fibers mismatch");
    const Eigen::Index n = family.fibers.front().dim();
    if (f.size() != n)
        throw std::invalid_argument("decomposition_identity_check: dimension mismatch");

    // LHS: the block operator's spectral measure on the vector (g_j f)_j
    const HermitianOperator block = block_direct_integral(family);
    Vector v(block.dim());
    for (std::size_t j = 0; j < family.fibers.size(); ++j)
        v.segment(static_cast<Eigen::Index>(j) * n, n) = family.weights[j] * f;
    const double lhs = spectral_measure(block, v).restrict_mass(a, b);

    // RHS: fiberwise projections summed with |g_j|^2
    double rhs = 0.0;
    for (std::size_t j = 0; j < family.fibers.size(); ++j)
        rhs += family.weights[j] * family.weights[j] *
               spectral_measure(family.fibers[j], f).restrict_mass(a, b);
    return std::abs(lhs - rhs);
}

KatoPutnamReport kato_putnam_identity(const OperatorPair& pair, const GridDiscretization& grid,
                                      int size_cap) {
    const Eigen::Index n = pair.dim();
    const Eigen::Index g = grid.n_points();
    if (n * g > size_cap)
        throw std::invalid_argument("kato_putnam_identity: fiber*grid dimension exceeds cap");

    const Matrix& a = pair.A().matrix();
    const Matrix& b = pair.B().matrix();
    const Matrix& t = grid.tanh_position();
    const Matrix& d = grid.arctan_momentum();
    const Matrix in = Matrix::Identity(n, n);
    const Matrix ig = Matrix::Identity(g, g);

    const Matrix h_hat = Eigen::kroneckerProduct(a, ig) + Eigen::kroneckerProduct(b, t);
    const Matrix d_hat = Eigen::kroneckerProduct(in, d);
    const HermitianOperator lhs = matrix_commutator(h_hat, d_hat);
    const HermitianOperator c = matrix_commutator(t, d);
    const Matrix rhs = Eigen::kroneckerProduct(b, c.matrix());

    KatoPutnamReport rep;
    rep.discrepancy = (lhs.matrix() - rhs).norm();
    Eigen::SelfAdjointEigenSolver<Matrix> esb(b, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Matrix> esc(c.matrix(), Eigen::EigenvaluesOnly);
    rep.norm_b = esb.eigenvalues().cwiseAbs().maxCoeff();
    rep.norm_c = esc.eigenvalues().cwiseAbs().maxCoeff();
    return rep;
}

PositivityReport positivity_report(const OperatorPair& pair, const GridDiscretization& grid) {
    const HermitianOperator c = howland_commutator(grid);
    const EigenDecomposition edb = eigh(pair.B());
    const EigenDecomposition edc = eigh(c);

    PositivityReport rep;
    rep.c_spectrum.assign(edc.eigenvalues.data(), edc.eigenvalues.data() + edc.eigenvalues.size());

    // eigenvalues of B (x) C are exactly the pairwise products
    std::vector<double> prods;
    prods.reserve(static_cast<std::size_t>(edb.eigenvalues.size() * edc.eigenvalues.size()));
    for (Eigen::Index i = 0; i < edb.eigenvalues.size(); ++i)
        for (Eigen::Index j = 0; j < edc.eigenvalues.size(); ++j)
            prods.push_back(edb.eigenvalues[i] * edc.eigenvalues[j]);

    rep.min_eigenvalue = *std::min_element(prods.begin(), prods.end());
    rep.max_eigenvalue = *std::max_element(prods.begin(), prods.end());
    const double bnorm = edb.eigenvalues.cwiseAbs().maxCoeff();
    const double cnorm = edc.eigenvalues.cwiseAbs().maxCoeff();
    const double kernel_tol = 1e-8 * std::max(bnorm * cnorm, 1e-300);
    std::size_t pos = 0, ker = 0;
    for (double v : prods) {
        if (v > 0.0) ++pos;
        if (std::abs(v) <= kernel_tol) ++ker;
    }
    rep.fraction_strictly_positive = static_cast<double>(pos) / static_cast<double>(prods.size());
    rep.kernel_dim = static_cast<int>(ker);

    int ker_b = 0, ker_c = 0;
    for (Eigen::Index i = 0; i < edb.eigenvalues.size(); ++i)
        if (std::abs(edb.eigenvalues[i]) <= 1e-8 * std::max(bnorm, 1e-300)) ++ker_b;
    for (Eigen::Index j = 0; j < edc.eigenvalues.size(); ++j)
        if (std::abs(edc.eigenvalues[j]) <= 1e-8 * std::max(cnorm, 1e-300)) ++ker_c;
    const int rank_b = static_cast<int>(pair.dim()) - ker_b;
    rep.expected_kernel_dim = ker_b * grid.n_points() + rank_b * ker_c;
    return rep;
}

double positive_part_infimum(const std::vector<double>& ascending_spectrum) {
    if (ascending_spectrum.empty())
        throw std::invalid_argument("positive_part_infimum: empty spectrum");
    const double top = ascending_spectrum.back();
    const double tol = 1e-8 * top;
    for (double v : ascending_spectrum)
        if (v > tol) return v;
    throw std::runtime_error("positive_part_infimum: no eigenvalue above threshold");
}

}  // namespace specavg
