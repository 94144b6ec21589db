#include "gpebo/mat.hpp"

#include "gpebo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace gpebo {

namespace {

std::string shape_str(const Mat& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void throw_shape(const char* op, const Mat& a, const Mat& b) {
    throw shape_error(std::string(op) + ": shape mismatch " + shape_str(a) +
                      " vs " + shape_str(b));
}

} // namespace

Mat::Mat(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
    : rows_(rows), cols_(cols), a_(entries) {
    if (a_.size() != rows * cols)
        throw shape_error("Mat init: " + std::to_string(entries.size()) +
                          " entries for shape " + std::to_string(rows) + "x" +
                          std::to_string(cols));
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::column(const std::vector<double>& v) {
    Mat m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (!a.same_shape(b)) throw_shape("add", a, b);
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (!a.same_shape(b)) throw_shape("sub", a, b);
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) throw_shape("mul", a, b);
    Mat r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Mat operator*(double s, const Mat& a) {
    Mat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) r.data()[i] = s * a.data()[i];
    return r;
}

Mat transpose(const Mat& a) {
    Mat r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

bool approx_equal(const Mat& a, const Mat& b, double tol) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i)
        if (std::fabs(a.data()[i] - b.data()[i]) > tol) return false;
    return true;
}

std::pair<double, double> eig2_real_parts(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2)
        throw shape_error("eig2_real_parts: need 2x2, got " + shape_str(m));
    double tr = m(0, 0) + m(1, 1);
    double d = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double disc = tr * tr / 4.0 - d;
    if (disc < 0.0) return {tr / 2.0, tr / 2.0};
    double s = std::sqrt(disc);
    return {tr / 2.0 + s, tr / 2.0 - s};
}

std::vector<double> sym_eigenvalues(const Mat& m) {
    if (m.rows() != m.cols())
        throw shape_error("sym_eigenvalues: need square, got " + shape_str(m));
    const std::size_t n = m.rows();
    std::vector<double> a(m.data(), m.data() + n * n);
    const double scale = std::max(frobenius_norm(m), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a[i * n + j] * a[i * n + j];
        if (std::sqrt(off) <= 1e-12 * scale) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::fabs(apq) < 1e-300) continue;
                double tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

double frobenius_norm(const Mat& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows() * m.cols(); ++i) s += m.data()[i] * m.data()[i];
    return std::sqrt(s);
}

double spectral_norm_sym(const Mat& m) {
    auto e = sym_eigenvalues(m);
    return std::max(std::fabs(e.front()), std::fabs(e.back()));
}

double spectral_norm(const Mat& m) {
    Mat g = transpose(m) * m;
    auto e = sym_eigenvalues(g);
    return std::sqrt(std::max(0.0, e.back()));
}

namespace {

// In-place partial-pivot LU; returns the permutation sign, 0 if singular.
int lu_decompose(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t n) {
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i) piv[i] = i;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t best = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[best * n + c])) best = r;
        if (a[best * n + c] == 0.0) return 0;
        if (best != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[best * n + j], a[c * n + j]);
            std::swap(piv[best], piv[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            a[r * n + c] = f;
            for (std::size_t j = c + 1; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
        }
    }
    return sign;
}

} // namespace

double det(const Mat& m) {
    if (m.rows() != m.cols())
        throw shape_error("det: need square, got " + shape_str(m));
    const std::size_t n = m.rows();
    std::vector<double> a(m.data(), m.data() + n * n);
    std::vector<std::size_t> piv(n);
    int sign = lu_decompose(a, piv, n);
    if (sign == 0) return 0.0;
    double d = sign;
    for (std::size_t i = 0; i < n; ++i) d *= a[i * n + i];
    return d;
}

std::vector<double> solve(const Mat& m, const std::vector<double>& b) {
    if (m.rows() != m.cols())
        throw shape_error("solve: need square, got " + shape_str(m));
    const std::size_t n = m.rows();
    if (b.size() != n)
        throw shape_error("solve: rhs length " + std::to_string(b.size()) +
                          " vs " + shape_str(m));
    std::vector<double> a(m.data(), m.data() + n * n);
    std::vector<std::size_t> piv(n);
    if (lu_decompose(a, piv, n) == 0)
        throw error("solve: singular matrix");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[piv[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= a[i * n + j] * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= a[ii * n + j] * x[j];
        x[ii] /= a[ii * n + ii];
    }
    return x;
}

bool spec_norm_exceeds(const double* f, std::size_t n, double bound) {
    double fr2 = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) fr2 += f[i] * f[i];
    // ||F||_2 <= ||F||_Fro <= sqrt(n) ||F||_2 for symmetric F.
    if (fr2 <= bound * bound) return false;
    if (fr2 > static_cast<double>(n) * bound * bound) return true;
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (f[i * n + i] > f[i0 * n + i0]) i0 = i;
    double v[16] = {0};
    v[i0] = 1.0;
    double rq = f[i0 * n + i0];
    for (int it = 0; it < 32; ++it) {
        double w[16], nw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) w[i] += f[i * n + j] * v[j];
            nw += w[i] * w[i];
        }
        nw = std::sqrt(nw);
        if (nw == 0.0) return false;
        double rqn = 0.0;
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
        for (std::size_t i = 0; i < n; ++i) {
            double fv = 0.0;
            for (std::size_t j = 0; j < n; ++j) fv += f[i * n + j] * v[j];
            rqn += v[i] * fv;
        }
        if (rqn > bound) return true;
        if (std::fabs(rqn - rq) <= 1e-13 * std::fabs(rqn)) return false;
        rq = rqn;
    }
    return rq > bound;
}

bool spec_norm_exceeds(const Mat& f, double bound) {
    if (f.rows() != f.cols() || f.rows() > 16)
        return spectral_norm_sym(f) > bound;
    return spec_norm_exceeds(f.data(), f.rows(), bound);
}

} // namespace gpebo
