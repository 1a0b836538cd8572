#pragma once

#include <stdexcept>
#include <vector>

#include "qcl/scalar.hpp"

namespace qcl {

// Dense matrix of exact rationals; only the handful of operations the block
// calculus needs.
class Matrix {
public:
    Matrix() = default;

    Matrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Matrix diagonal(const std::vector<Rational>& d) {
        Matrix m(d.size(), d.size());
        for (size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Rational& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const {
        for (const Rational& v : data_)
            if (!qcl::is_zero(v)) return false;
        return true;
    }

    Rational trace() const {
        if (rows_ != cols_) throw std::invalid_argument("trace of a non-square matrix");
        Rational t(0);
        for (size_t i = 0; i < rows_; ++i) t += at(i, i);
        return t;
    }

    // entries are real rationals, so the adjoint is the transpose
    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const Rational& aik = a.at(i, k);
                if (qcl::is_zero(aik)) continue;
                for (size_t j = 0; j < b.cols_; ++j) out.at(i, j) += aik * b.at(k, j);
            }
        return out;
    }

    Matrix& scale(const Rational& c) {
        for (Rational& v : data_) v *= c;
        return *this;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

}  // namespace qcl
