#pragma once

#include <cstddef>
#include <vector>

#include "ellwk/rational.hpp"

namespace ellwk {

using RatVec = std::vector<Rat>;

/// Dense exact-rational matrix. Small dimensions only (the ambient spaces
/// here are rank l+4 <= 12), so plain Gauss-Jordan is fine.
class RatMat {
public:
    RatMat() = default;
    RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMat identity(std::size_t n) {
        RatMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const RatMat& o) const { return !(*this == o); }

    RatMat operator*(const RatMat& o) const {
        if (cols_ != o.rows_) throw Error("dimension mismatch");
        RatMat out(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& aik = (*this)(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += aik * o(k, j);
            }
        return out;
    }

    RatVec operator*(const RatVec& v) const {
        if (cols_ != v.size()) throw Error("dimension mismatch");
        RatVec out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (v[j] != 0) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    RatMat operator+(const RatMat& o) const {
        RatMat out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
        return out;
    }

    RatMat operator-(const RatMat& o) const {
        RatMat out = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
        return out;
    }

    RatMat scaled(const Rat& c) const {
        RatMat out = *this;
        for (auto& x : out.data_) x *= c;
        return out;
    }

    RatMat transposed() const {
        RatMat out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != Rat(i == j ? 1 : 0)) return false;
        return true;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

    /// Gauss-Jordan inverse. Throws Error("not invertible") on singular input.
    RatMat inverse() const {
        if (rows_ != cols_) throw Error("not invertible", "non-square");
        const std::size_t n = rows_;
        RatMat a = *this;
        RatMat inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && a(piv, col) == 0) ++piv;
            if (piv == n) throw Error("not invertible");
            if (piv != col) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(a(piv, j), a(col, j));
                    std::swap(inv(piv, j), inv(col, j));
                }
            }
            const Rat d = a(col, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(col, j) /= d;
                inv(col, j) /= d;
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || a(i, col) == 0) continue;
                const Rat f = a(i, col);
                for (std::size_t j = 0; j < n; ++j) {
                    a(i, j) -= f * a(col, j);
                    inv(i, j) -= f * inv(col, j);
                }
            }
        }
        return inv;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> data_;
};

struct Signature {
    int n_plus = 0;
    int n_zero = 0;
    int n_minus = 0;
    bool operator==(const Signature&) const = default;
};

/// Sylvester signature of a symmetric rational matrix via exact symmetric
/// congruence (Lagrange diagonalization).
inline Signature signature_of(const RatMat& sym) {
    const std::size_t n = sym.rows();
    RatMat a = sym;
    Signature sig;
    auto swap_rc = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
        for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
    };
    auto add_rc = [&](std::size_t i, std::size_t j, const Rat& f) {
        // row_i += f*row_j, then col_i += f*col_j: keeps symmetry
        for (std::size_t k = 0; k < n; ++k) a(i, k) += f * a(j, k);
        for (std::size_t k = 0; k < n; ++k) a(k, i) += f * a(k, j);
    };
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t i = k + 1;
            while (i < n && a(i, i) == 0) ++i;
            if (i < n) {
                swap_rc(k, i);
            } else {
                // all remaining diagonal entries vanish; look for an
                // off-diagonal entry to fold onto the diagonal
                bool found = false;
                for (std::size_t p = k; p < n && !found; ++p)
                    for (std::size_t q = p + 1; q < n && !found; ++q)
                        if (a(p, q) != 0) {
                            add_rc(p, q, 1);  // makes a(p,p) = 2*a(p,q) != 0
                            if (p != k) swap_rc(k, p);
                            found = true;
                        }
                if (!found) {
                    sig.n_zero += static_cast<int>(n - k);
                    return sig;
                }
            }
        }
        const Rat piv = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            add_rc(i, k, -a(i, k) / piv);
        }
        if (piv > 0)
            ++sig.n_plus;
        else
            ++sig.n_minus;
    }
    return sig;
}

/// Exact rank of a rational matrix (rows may exceed columns).
inline std::size_t rank_of(RatMat a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && a(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(rank, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (a(i, col) == 0) continue;
            const Rat f = a(i, col) / a(rank, col);
            for (std::size_t j = col; j < cols; ++j) a(i, j) -= f * a(rank, j);
        }
        ++rank;
    }
    return rank;
}

/// I(x, y) = x^T G y for exact vectors.
inline Rat bilinear(const RatMat& gram, const RatVec& x, const RatVec& y) {
    Rat acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0) acc += x[i] * gram(i, j) * y[j];
    }
    return acc;
}

}  // namespace ellwk
