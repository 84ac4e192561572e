#pragma once

#include <cstddef>
#include <vector>

namespace qnmc {

/// Dense real symmetric matrix. Symmetry is an invariant of the type:
/// construction from raw rows symmetrizes input whose asymmetry is
/// below tolerance and rejects anything worse, and the only mutator
/// writes both (i,j) and (j,i).
class SymMatrix {
  public:
    /// dim x dim zero matrix. dim must be >= 1.
    explicit SymMatrix(std::size_t dim);

    /// Validating constructor. Rejects input where some
    /// |a_ij - a_ji| > 1e-12 * max|entry|; otherwise stores (A + A^T)/2,
    /// which absorbs round-off drift from accumulation.
    static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);

    static SymMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }

    double operator()(std::size_t i, std::size_t j) const {
        return entries_[i * dim_ + j];
    }

    /// Sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double value) {
        entries_[i * dim_ + j] = value;
        entries_[j * dim_ + i] = value;
    }

    double trace() const;
    double frobenius_norm() const;
    /// Largest |entry|.
    double max_abs() const;

    SymMatrix operator+(const SymMatrix& other) const;
    SymMatrix operator-(const SymMatrix& other) const;
    SymMatrix scaled(double factor) const;

    bool operator==(const SymMatrix& other) const = default;

  private:
    std::size_t dim_;
    std::vector<double> entries_;  // row-major, kept exactly symmetric
};

/// Outer product v v^T (exactly symmetric in floating point).
SymMatrix outer_product(const std::vector<double>& v);

/// Full spectral decomposition of a symmetric matrix.
/// eigenvalues are sorted ascending, ties broken by original diagonal
/// index; eigenvectors[k] is the unit eigenvector paired with
/// eigenvalues[k].
struct EigenResult {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
};

/// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius
/// norm drops below 1e-12 * (1 + ||input||_F); throws NumericError after
/// 100 sweeps without convergence. Deterministic: identical input bytes
/// give identical output bytes.
EigenResult sym_eigen(const SymMatrix& m);

/// True iff the smallest eigenvalue of m is >= -tol.
bool psd_check(const SymMatrix& m, double tol);

/// Symmetric PSD matrix with unit trace; the representation of encoded
/// patterns and of quantum centroids.
class DensityMatrix {
  public:
    /// Validates |trace - 1| <= 1e-9 and eigenvalues >= -1e-9;
    /// throws NumericError otherwise.
    explicit DensityMatrix(SymMatrix m);

    /// Pure state |v><v| from a unit vector (norm checked to 1e-9).
    static DensityMatrix pure(const std::vector<double>& unit_vector);

    const SymMatrix& matrix() const { return mat_; }
    std::size_t dim() const { return mat_.dim(); }

    bool operator==(const DensityMatrix& other) const = default;

  private:
    SymMatrix mat_;
};

/// Trace distance (1/2) Tr|rho - sigma|, evaluated as half the sum of
/// absolute eigenvalues of the difference. A metric on density matrices
/// with values in [0, 1]. Throws on dimension mismatch.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qnmc
