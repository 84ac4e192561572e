#include "qnmc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qnmc/error.hpp"

namespace qnmc {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
    if (dim < 1) {
        throw NumericError("SymMatrix: dimension must be >= 1");
    }
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    if (n == 0) {
        throw NumericError("SymMatrix: dimension must be >= 1");
    }
    SymMatrix m(n);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) {
            throw NumericError("SymMatrix: input is not square (row " + std::to_string(i) +
                               " has " + std::to_string(rows[i].size()) + " of " +
                               std::to_string(n) + " entries)");
        }
        for (double v : rows[i]) {
            if (!std::isfinite(v)) {
                throw NumericError("SymMatrix: non-finite entry");
            }
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    const double tol = 1e-12 * max_abs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double a = rows[i][j];
            const double b = rows[j][i];
            if (std::abs(a - b) > tol) {
                throw NumericError("SymMatrix: asymmetric input at (" + std::to_string(i) +
                                   "," + std::to_string(j) + "): " + std::to_string(a) +
                                   " vs " + std::to_string(b));
            }
            m.set(i, j, 0.5 * (a + b));
        }
    }
    return m;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m.set(i, i, 1.0);
    }
    return m;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double SymMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : entries_) {
        s += v * v;
    }
    return std::sqrt(s);
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : entries_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
    if (other.dim_ != dim_) {
        throw NumericError("SymMatrix: dimension mismatch in addition");
    }
    SymMatrix r(dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        r.entries_[k] = entries_[k] + other.entries_[k];
    }
    return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
    if (other.dim_ != dim_) {
        throw NumericError("SymMatrix: dimension mismatch in subtraction");
    }
    SymMatrix r(dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        r.entries_[k] = entries_[k] - other.entries_[k];
    }
    return r;
}

SymMatrix SymMatrix::scaled(double factor) const {
    SymMatrix r(dim_);
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        r.entries_[k] = entries_[k] * factor;
    }
    return r;
}

SymMatrix outer_product(const std::vector<double>& v) {
    SymMatrix m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i; j < v.size(); ++j) {
            m.set(i, j, v[i] * v[j]);
        }
    }
    return m;
}

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

EigenResult sym_eigen(const SymMatrix& m) {
    const std::size_t n = m.dim();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = m(i, j);
        }
    }
    // v holds the accumulated rotations, column k = eigenvector k.
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        v[i * n + i] = 1.0;
    }

    const double threshold = 1e-12 * (1.0 + m.frobenius_norm());
    constexpr int kMaxSweeps = 100;

    bool converged = off_diagonal_norm(a, n) < threshold;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) {
                    continue;
                }
                // Rotation angle zeroing a[p][q] (Golub & Van Loan, sym.schur2).
                const double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) {
                        continue;
                    }
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[p * n + k] = a[k * n + p];
                    a[k * n + q] = s * akp + c * akq;
                    a[q * n + k] = a[k * n + q];
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        converged = off_diagonal_norm(a, n) < threshold;
    }
    if (!converged) {
        throw NumericError("sym_eigen: Jacobi iteration did not converge in 100 sweeps");
    }

    // Ascending eigenvalue order, ties kept in original diagonal order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a[x * n + x] < a[y * n + y];
    });

    EigenResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        result.eigenvalues[k] = a[src * n + src];
        for (std::size_t i = 0; i < n; ++i) {
            result.eigenvectors[k][i] = v[i * n + src];
        }
    }
    return result;
}

bool psd_check(const SymMatrix& m, double tol) {
    if (tol < 0.0) {
        throw NumericError("psd_check: tolerance must be >= 0");
    }
    const EigenResult eig = sym_eigen(m);
    return eig.eigenvalues.front() >= -tol;
}

DensityMatrix::DensityMatrix(SymMatrix m) : mat_(std::move(m)) {
    const double tr = mat_.trace();
    if (std::abs(tr - 1.0) > 1e-9) {
        throw NumericError("DensityMatrix: trace is " + std::to_string(tr) +
                           ", expected 1 within 1e-9");
    }
    if (!psd_check(mat_, 1e-9)) {
        throw NumericError("DensityMatrix: matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::pure(const std::vector<double>& unit_vector) {
    double norm_sq = 0.0;
    for (double x : unit_vector) {
        norm_sq += x * x;
    }
    if (std::abs(norm_sq - 1.0) > 1e-9) {
        throw NumericError("DensityMatrix::pure: vector norm differs from 1");
    }
    return DensityMatrix(outer_product(unit_vector));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw NumericError("trace_distance: dimension mismatch (" +
                           std::to_string(rho.dim()) + " vs " +
                           std::to_string(sigma.dim()) + ")");
    }
    const EigenResult eig = sym_eigen(rho.matrix() - sigma.matrix());
    double sum = 0.0;
    for (double lambda : eig.eigenvalues) {
        sum += std::abs(lambda);
    }
    return 0.5 * sum;
}

}  // namespace qnmc
