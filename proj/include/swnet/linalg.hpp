#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace swnet {

/// Small dense column-major matrix. Sizes in this code are tiny (junction
/// systems, Hermite constraint solves), so no blocking or pivot heuristics
/// beyond partial pivoting.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[j * rows_ + i]; }

    std::vector<double> operator*(const std::vector<double>& x) const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t i = 0; i < rows_; ++i) y[i] += (*this)(i, j) * x[j];
        return y;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// LU factorization with partial pivoting, for square systems up to ~20x20.
class Lu {
public:
    explicit Lu(Mat m) : lu_(std::move(m)), piv_(lu_.rows()) {
        const std::size_t n = lu_.rows();
        if (lu_.cols() != n) throw std::invalid_argument("Lu: matrix not square");
        double scale = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(lu_(i, j)));
        for (std::size_t i = 0; i < n; ++i) piv_[i] = i;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
            if (p != k) {
                std::swap(piv_[p], piv_[k]);
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(p, j), lu_(k, j));
                sign_ = -sign_;
            }
            const double pivot = lu_(k, k);
            if (std::abs(pivot) <= 1e-14 * std::max(scale, 1e-300))
                throw SingularMatrixError("Lu: singular pivot");
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= pivot;
                const double f = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    std::vector<double> solve(const std::vector<double>& b) const {
        const std::size_t n = lu_.rows();
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = b[piv_[i]];
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
        for (std::size_t k = n; k-- > 0;) {
            for (std::size_t j = k + 1; j < n; ++j) x[k] -= lu_(k, j) * x[j];
            x[k] /= lu_(k, k);
        }
        return x;
    }

    double det() const {
        double d = sign_;
        for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
        return d;
    }

private:
    Mat lu_;
    std::vector<std::size_t> piv_;
    double sign_ = 1.0;
};

inline std::vector<double> solve(const Mat& a, const std::vector<double>& b) {
    return Lu(a).solve(b);
}

}  // namespace swnet
