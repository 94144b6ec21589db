#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace gpebo {

// Dense row-major matrix of doubles. Sized for small systems (n <= 12);
// every operation is O(n^3) at worst and allocation-happy by design.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
    Mat(std::size_t rows, std::size_t cols, std::initializer_list<double> entries);

    static Mat identity(std::size_t n);
    static Mat column(const std::vector<double>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Mat transpose(const Mat& a);

bool approx_equal(const Mat& a, const Mat& b, double tol);

// Real parts of the two eigenvalues of a 2x2 matrix, larger first
// (trace/determinant formula; complex pairs share trace/2).
std::pair<double, double> eig2_real_parts(const Mat& m);

// Eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi sweeps
// (off-diagonal tolerance 1e-12 relative to the Frobenius norm).
std::vector<double> sym_eigenvalues(const Mat& m);

double frobenius_norm(const Mat& m);

// Largest |eigenvalue| of a symmetric matrix (== its spectral norm).
double spectral_norm_sym(const Mat& m);

// Spectral norm of a general matrix via sym_eigenvalues(m^T m).
double spectral_norm(const Mat& m);

double det(const Mat& m);

// Solve a x = b (partial-pivot LU); b and the result are column vectors.
std::vector<double> solve(const Mat& a, const std::vector<double>& b);

// Cheap decision procedure for "spectral norm of symmetric f exceeds bound":
// Frobenius bounds first, power iteration (Rayleigh quotient ascends to the
// top eigenvalue of a PSD-dominant matrix) to settle the sandwich. Exact on
// the cases arising from gain matrices; used in the simulation hot loop.
bool spec_norm_exceeds(const Mat& f, double bound);
bool spec_norm_exceeds(const double* f, std::size_t n, double bound);

} // namespace gpebo
