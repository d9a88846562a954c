#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "scalar.hpp"

namespace teplab {

// Dense matrix over Q(i).  Small ranks only (the solvers in this project top
// out around a few hundred unknowns), so plain Gaussian elimination with
// exact pivots is the right tool.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw Inconsistent("ragged matrix literal");
            for (const auto& x : r) a_.push_back(x);
        }
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t k = 0; k < n; k++) m(k, k) = Scalar(1);
        return m;
    }
    static Matrix scalar(size_t n, const Scalar& c) {
        Matrix m(n, n);
        for (size_t k = 0; k < n; k++) m(k, k) = c;
        return m;
    }
    static Matrix diagonal(const std::vector<Scalar>& d) {
        Matrix m(d.size(), d.size());
        for (size_t k = 0; k < d.size(); k++) m(k, k) = d[k];
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Scalar& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const Scalar& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_square() const { return rows_ == cols_; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (size_t r = 0; r < rows_; r++)
            for (size_t c = 0; c < cols_; c++) t(c, r) = (*this)(r, c);
        return t;
    }
    Matrix conj() const {
        Matrix t(rows_, cols_);
        for (size_t k = 0; k < a_.size(); k++) t.a_[k] = a_[k].conj();
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_shape_(o);
        for (size_t k = 0; k < a_.size(); k++) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_shape_(o);
        for (size_t k = 0; k < a_.size(); k++) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(const Scalar& c) {
        for (auto& x : a_) x *= c;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const Scalar& c) { return a *= c; }
    friend Matrix operator*(const Scalar& c, Matrix a) { return a *= c; }
    friend Matrix operator-(const Matrix& a) { return a * Scalar(-1); }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Inconsistent("matrix product shape mismatch");
        Matrix p(a.rows_, b.cols_);
        for (size_t r = 0; r < a.rows_; r++)
            for (size_t k = 0; k < a.cols_; k++) {
                const Scalar& x = a(r, k);
                if (x.is_zero()) continue;
                for (size_t c = 0; c < b.cols_; c++) p(r, c) += x * b(k, c);
            }
        return p;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Scalar trace() const {
        Scalar t;
        for (size_t k = 0; k < rows_ && k < cols_; k++) t += (*this)(k, k);
        return t;
    }

    // [a, b] = ab - ba
    friend Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

    // In-place reduced row echelon form; returns pivot column list.
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t lead = 0;
        for (size_t r = 0; r < rows_ && lead < cols_; lead++) {
            size_t p = r;
            while (p < rows_ && (*this)(p, lead).is_zero()) p++;
            if (p == rows_) continue;
            swap_rows_(p, r);
            Scalar inv = (*this)(r, lead).inverse();
            for (size_t c = lead; c < cols_; c++) (*this)(r, c) *= inv;
            for (size_t rr = 0; rr < rows_; rr++) {
                if (rr == r) continue;
                Scalar f = (*this)(rr, lead);
                if (f.is_zero()) continue;
                for (size_t c = lead; c < cols_; c++)
                    (*this)(rr, c) -= f * (*this)(r, c);
            }
            pivots.push_back(lead);
            r++;
        }
        return pivots;
    }

    size_t rank() const {
        Matrix m = *this;
        return m.rref().size();
    }

    Matrix inverse() const {
        if (!is_square()) throw Inconsistent("inverse of non-square matrix");
        Matrix aug(rows_, 2 * cols_);
        for (size_t r = 0; r < rows_; r++) {
            for (size_t c = 0; c < cols_; c++) aug(r, c) = (*this)(r, c);
            aug(r, cols_ + r) = Scalar(1);
        }
        auto pivots = aug.rref();
        if (pivots.size() != rows_ || pivots.back() >= cols_)
            throw NotAUnit("singular matrix");
        Matrix inv(rows_, cols_);
        for (size_t r = 0; r < rows_; r++)
            for (size_t c = 0; c < cols_; c++) inv(r, c) = aug(r, cols_ + c);
        return inv;
    }

    Scalar det() const {
        if (!is_square()) throw Inconsistent("determinant of non-square matrix");
        Matrix m = *this;
        Scalar d(1);
        for (size_t c = 0; c < cols_; c++) {
            size_t p = c;
            while (p < rows_ && m(p, c).is_zero()) p++;
            if (p == rows_) return Scalar(0);
            if (p != c) {
                m.swap_rows_(p, c);
                d = -d;
            }
            d *= m(c, c);
            Scalar inv = m(c, c).inverse();
            for (size_t r = c + 1; r < rows_; r++) {
                Scalar f = m(r, c) * inv;
                if (f.is_zero()) continue;
                for (size_t cc = c; cc < cols_; cc++) m(r, cc) -= f * m(c, cc);
            }
        }
        return d;
    }

    // Characteristic polynomial of a square matrix, coefficients c_0..c_n
    // ascending, monic: det(x*Id - A).  Faddeev-LeVerrier; division by the
    // step index is exact over Q(i).
    std::vector<Scalar> charpoly() const {
        if (!is_square()) throw Inconsistent("charpoly of non-square matrix");
        size_t n = rows_;
        std::vector<Scalar> c(n + 1);
        c[n] = Scalar(1);
        Matrix m(n, n);
        for (size_t k = 1; k <= n; k++) {
            m = (*this) * m + Matrix::scalar(n, c[n - k + 1]);
            Scalar t = ((*this) * m).trace();
            c[n - k] = -t / Scalar(static_cast<long>(k));
        }
        return c;
    }

    // Basis for the right kernel {v : Av = 0}, each vector a column.
    std::vector<std::vector<Scalar>> kernel_basis() const {
        Matrix m = *this;
        auto pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (size_t p : pivots) is_pivot[p] = true;
        std::vector<std::vector<Scalar>> basis;
        for (size_t free = 0; free < cols_; free++) {
            if (is_pivot[free]) continue;
            std::vector<Scalar> v(cols_);
            v[free] = Scalar(1);
            for (size_t r = 0; r < pivots.size(); r++) v[pivots[r]] = -m(r, free);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    std::string str() const {
        std::string out = "[";
        for (size_t r = 0; r < rows_; r++) {
            out += r ? ", [" : "[";
            for (size_t c = 0; c < cols_; c++) {
                if (c) out += ", ";
                out += (*this)(r, c).str();
            }
            out += "]";
        }
        return out + "]";
    }

private:
    void check_shape_(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Inconsistent("matrix shape mismatch");
    }
    void swap_rows_(size_t a, size_t b) {
        if (a == b) return;
        for (size_t c = 0; c < cols_; c++) std::swap((*this)(a, c), (*this)(b, c));
    }

    size_t rows_, cols_;
    std::vector<Scalar> a_;
};

// Solve Ax = b.  Returns the unique solution; throws NoSolution if the
// system is inconsistent and NonUnique if the kernel is nontrivial.
inline std::vector<Scalar> solve_unique(const Matrix& A, const std::vector<Scalar>& b) {
    if (A.rows() != b.size()) throw Inconsistent("solve shape mismatch");
    Matrix aug(A.rows(), A.cols() + 1);
    for (size_t r = 0; r < A.rows(); r++) {
        for (size_t c = 0; c < A.cols(); c++) aug(r, c) = A(r, c);
        aug(r, A.cols()) = b[r];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == A.cols())
        throw NoSolution("inconsistent linear system");
    if (pivots.size() < A.cols())
        throw NonUnique("underdetermined linear system");
    std::vector<Scalar> x(A.cols());
    for (size_t r = 0; r < pivots.size(); r++) x[pivots[r]] = aug(r, A.cols());
    return x;
}

// General affine solve: returns a particular solution and a kernel basis.
struct AffineSolution {
    std::vector<Scalar> particular;
    std::vector<std::vector<Scalar>> kernel;
};

inline AffineSolution solve_affine(const Matrix& A, const std::vector<Scalar>& b) {
    if (A.rows() != b.size()) throw Inconsistent("solve shape mismatch");
    Matrix aug(A.rows(), A.cols() + 1);
    for (size_t r = 0; r < A.rows(); r++) {
        for (size_t c = 0; c < A.cols(); c++) aug(r, c) = A(r, c);
        aug(r, A.cols()) = b[r];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == A.cols())
        throw NoSolution("inconsistent linear system");
    AffineSolution sol;
    sol.particular.assign(A.cols(), Scalar(0));
    for (size_t r = 0; r < pivots.size(); r++)
        sol.particular[pivots[r]] = aug(r, A.cols());
    std::vector<bool> is_pivot(A.cols(), false);
    for (size_t p : pivots) is_pivot[p] = true;
    for (size_t free = 0; free < A.cols(); free++) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(A.cols());
        v[free] = Scalar(1);
        for (size_t r = 0; r < pivots.size(); r++) v[pivots[r]] = -aug(r, free);
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

}  // namespace teplab
