#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "nmq/errors.hpp"

namespace nmq {

using cxd = std::complex<double>;

// Dense complex square matrix. States handled by the channel modules are
// 2x2 or 4x4; Choi-style operators and environment states go up to 16x16.
class Matrix {
  public:
    Matrix() : n_(0) {}
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, cxd{0.0, 0.0}) {}
    Matrix(int n, std::initializer_list<cxd> entries);

    static Matrix identity(int n);
    static Matrix diagonal(const std::vector<double>& d);

    int dim() const { return n_; }

    cxd& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const cxd& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    Matrix dagger() const;
    cxd trace() const;
    double max_abs() const;

    // max_ij |A_ij - (A^dagger)_ij|, the Hermiticity defect
    double hermiticity_defect() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cxd c);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(cxd c, Matrix a) { return a *= c; }
    friend Matrix operator*(Matrix a, cxd c) { return a *= c; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

  private:
    int n_;
    std::vector<cxd> a_;
};

Matrix kron(const Matrix& a, const Matrix& b);

// Entrywise (Hadamard) product. Throws DimensionMismatch.
Matrix hadamard_product(const Matrix& a, const Matrix& b);

// Eigenvalues of a Hermitian matrix, descending. Cyclic Jacobi with complex
// rotations; closed form for n = 2. Throws NonHermitianInput if the
// Hermiticity defect exceeds herm_tol.
std::vector<double> hermitian_eigenvalues(const Matrix& m, double herm_tol = 1e-10);

// A density matrix: Hermitian, unit trace, positive semidefinite within
// numerical tolerance. checked() validates all three invariants; trusted()
// skips the spectral test for matrices produced by exact channel formulas
// (property suites re-validate those downstream).
class DensityMatrix {
  public:
    static DensityMatrix checked(Matrix m);
    static DensityMatrix trusted(Matrix m);

    int dim() const { return m_.dim(); }
    const Matrix& matrix() const { return m_; }
    const cxd& operator()(int i, int j) const { return m_(i, j); }

    static constexpr double hermitian_tol = 1e-12;
    static constexpr double trace_tol = 1e-12;
    static constexpr double psd_tol = -1e-10;

  private:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

// Von Neumann entropy in bits. Eigenvalues in [-1e-10, 0) are clamped to 0;
// anything more negative means the input was not a state (InvalidState).
double von_neumann_entropy(const DensityMatrix& rho);

// H2(p) = -p log2 p - (1-p) log2(1-p). Inputs within 1e-12 of [0,1] are
// clamped; DomainError otherwise.
double binary_entropy(double p);

// D(rho1, rho2) = (1/2) sum_i |lambda_i(rho1 - rho2)|.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

enum class Subsystem { first, second };

// Partial trace of a two-qubit state down to the kept qubit.
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep);

// --- common states and operators -------------------------------------------

Matrix pauli_z();
Matrix sigma_minus();  // lowering operator, |0> = ground

DensityMatrix pure_state(const std::vector<cxd>& amplitudes);
DensityMatrix basis_state(int dim, int index);
DensityMatrix maximally_mixed(int dim);
DensityMatrix plus_state();   // |+><+|
DensityMatrix minus_state();  // |-><-|

enum class BellKind { phi_plus, phi_minus, psi_plus, psi_minus };
DensityMatrix bell_state(BellKind kind);

DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace nmq
