#include "nmq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace nmq {

Matrix::Matrix(int n, std::initializer_list<cxd> entries) : Matrix(n) {
    if (static_cast<int>(entries.size()) != n * n)
        throw DimensionMismatch("matrix initializer has wrong length");
    std::copy(entries.begin(), entries.end(), a_.begin());
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    Matrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = d[static_cast<size_t>(i)];
    return m;
}

Matrix Matrix::dagger() const {
    Matrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cxd Matrix::trace() const {
    cxd t{0.0, 0.0};
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::hermiticity_defect() const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (o.n_ != n_) throw DimensionMismatch("matrix addition dimension mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (o.n_ != n_) throw DimensionMismatch("matrix subtraction dimension mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(cxd c) {
    for (auto& x : a_) x *= c;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix product dimension mismatch");
    const int n = a.n_;
    Matrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cxd aik = a(i, k);
            if (aik == cxd{0.0, 0.0}) continue;
            for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    const int na = a.dim(), nb = b.dim();
    Matrix r(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) {
            const cxd aij = a(i, j);
            if (aij == cxd{0.0, 0.0}) continue;
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
        }
    return r;
}

Matrix hadamard_product(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("hadamard product dimension mismatch");
    Matrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) r(i, j) = a(i, j) * b(i, j);
    return r;
}

namespace {

// Cyclic Jacobi for complex Hermitian matrices. Each rotation first removes
// the phase of a_pq, then applies a real Givens rotation; the matrix stays
// Hermitian throughout and the diagonal converges to the spectrum.
std::vector<double> jacobi_spectrum(Matrix a) {
    const int n = a.dim();
    double scale = a.max_abs();
    if (scale == 0.0) return std::vector<double>(static_cast<size_t>(n), 0.0);

    const double tol = 1e-15 * scale;
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cxd apq = a(p, q);
                const double bmag = std::abs(apq);
                if (bmag <= tol) continue;

                // phase removal: column/row q by conj(phase)/phase
                const cxd phase = apq / bmag;
                for (int k = 0; k < n; ++k) a(k, q) *= std::conj(phase);
                for (int k = 0; k < n; ++k) a(q, k) *= phase;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * bmag);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const cxd akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cxd apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eigs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) eigs[static_cast<size_t>(i)] = a(i, i).real();
    std::sort(eigs.begin(), eigs.end(), std::greater<double>());
    return eigs;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const Matrix& m, double herm_tol) {
    const double scale = std::max(1.0, m.max_abs());
    if (m.hermiticity_defect() > herm_tol * scale)
        throw NonHermitianInput("hermitian_eigenvalues: input is not Hermitian");

    if (m.dim() == 1) return {m(0, 0).real()};
    if (m.dim() == 2) {
        const double a = m(0, 0).real(), d = m(1, 1).real();
        const double h = 0.5 * (a - d);
        const double r = std::sqrt(h * h + std::norm(m(0, 1)));
        const double mid = 0.5 * (a + d);
        return {mid + r, mid - r};
    }
    return jacobi_spectrum(m);
}

DensityMatrix DensityMatrix::checked(Matrix m) {
    if (m.dim() < 1) throw InvalidState("density matrix must be non-empty");
    if (m.hermiticity_defect() > hermitian_tol)
        throw InvalidState("density matrix is not Hermitian");
    if (std::abs(m.trace() - cxd{1.0, 0.0}) > trace_tol)
        throw InvalidState("density matrix trace differs from 1");
    const auto eigs = hermitian_eigenvalues(m, 1e-10);
    if (eigs.back() < psd_tol)
        throw InvalidState("density matrix has a negative eigenvalue");
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::trusted(Matrix m) {
    // symmetrize away floating-point asymmetry from channel arithmetic
    Matrix h(m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return DensityMatrix(std::move(h));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    auto eigs = hermitian_eigenvalues(rho.matrix(), 1e-10);
    double s = 0.0;
    for (double l : eigs) {
        if (l < DensityMatrix::psd_tol)
            throw InvalidState("von_neumann_entropy: negative eigenvalue beyond tolerance");
        if (l <= 0.0) continue;
        s -= l * std::log2(l);
    }
    return std::max(0.0, s);
}

double binary_entropy(double p) {
    if (p < -1e-12 || p > 1.0 + 1e-12)
        throw DomainError("binary_entropy: probability outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) throw DimensionMismatch("trace_distance dimension mismatch");
    const auto eigs = hermitian_eigenvalues(rho1.matrix() - rho2.matrix(), 1e-9);
    double d = 0.0;
    for (double l : eigs) d += std::abs(l);
    return 0.5 * d;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
    if (rho.dim() != 4) throw DimensionMismatch("partial_trace expects a 4x4 state");
    Matrix r(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cxd sum{0.0, 0.0};
            for (int k = 0; k < 2; ++k) {
                if (keep == Subsystem::first)
                    sum += rho(2 * i + k, 2 * j + k);
                else
                    sum += rho(2 * k + i, 2 * k + j);
            }
            r(i, j) = sum;
        }
    return DensityMatrix::trusted(std::move(r));
}

Matrix pauli_z() {
    Matrix z(2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

Matrix sigma_minus() {
    Matrix s(2);
    s(0, 1) = 1.0;  // |0><1|
    return s;
}

DensityMatrix pure_state(const std::vector<cxd>& amplitudes) {
    const int n = static_cast<int>(amplitudes.size());
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (norm2 <= 0.0) throw InvalidState("pure_state: zero vector");
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = amplitudes[static_cast<size_t>(i)] * std::conj(amplitudes[static_cast<size_t>(j)]) / norm2;
    return DensityMatrix::trusted(std::move(m));
}

DensityMatrix basis_state(int dim, int index) {
    std::vector<cxd> v(static_cast<size_t>(dim), cxd{0.0, 0.0});
    v[static_cast<size_t>(index)] = 1.0;
    return pure_state(v);
}

DensityMatrix maximally_mixed(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0 / dim;
    return DensityMatrix::trusted(std::move(m));
}

DensityMatrix plus_state() { return pure_state({1.0, 1.0}); }
DensityMatrix minus_state() { return pure_state({1.0, -1.0}); }

DensityMatrix bell_state(BellKind kind) {
    switch (kind) {
        case BellKind::phi_plus: return pure_state({1.0, 0.0, 0.0, 1.0});
        case BellKind::phi_minus: return pure_state({1.0, 0.0, 0.0, -1.0});
        case BellKind::psi_plus: return pure_state({0.0, 1.0, 1.0, 0.0});
        case BellKind::psi_minus: return pure_state({0.0, 1.0, -1.0, 0.0});
    }
    throw DomainError("bell_state: unknown kind");
}

DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix::trusted(kron(a.matrix(), b.matrix()));
}

}  // namespace nmq
