// matexp.hpp — minimal dense square-matrix arithmetic and the scaling-and-
// squaring matrix exponential (Pade approximants, Higham's degree/threshold
// selection).  Vertex sets are small, so dense storage is the exact and
// simple choice.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hybridcd {

struct DenseMatrix {
    int n = 0;
    std::vector<double> a;  // row-major n*n

    DenseMatrix() = default;
    explicit DenseMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {
        if (size <= 0) throw std::invalid_argument("DenseMatrix: size must be positive");
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static DenseMatrix identity(int size) {
        DenseMatrix m(size);
        for (int i = 0; i < size; ++i) m(i, i) = 1.0;
        return m;
    }

    DenseMatrix& operator+=(const DenseMatrix& rhs) {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += rhs.a[k];
        return *this;
    }
    DenseMatrix& operator*=(double s) {
        for (double& v : a) v *= s;
        return *this;
    }

    friend DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs += rhs; }
    friend DenseMatrix operator*(double s, DenseMatrix m) { return m *= s; }

    friend DenseMatrix operator*(const DenseMatrix& x, const DenseMatrix& y) {
        const int n = x.n;
        DenseMatrix r(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const double xik = x(i, k);
                if (xik == 0.0) continue;
                for (int j = 0; j < n; ++j) r(i, j) += xik * y(k, j);
            }
        return r;
    }

    // y = A x
    std::vector<double> apply(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != n)
            throw std::invalid_argument("DenseMatrix::apply: size mismatch");
        std::vector<double> y(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += (*this)(i, j) * x[j];
            y[static_cast<std::size_t>(i)] = s;
        }
        return y;
    }

    // max column sum
    double l1_norm() const {
        double best = 0.0;
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += std::abs((*this)(i, j));
            if (s > best) best = s;
        }
        return best;
    }
};

// Solve A X = B by LU with partial pivoting (A overwritten conceptually; we
// work on copies — matrices are tiny).
inline DenseMatrix lu_solve(DenseMatrix A, DenseMatrix B) {
    const int n = A.n;
    if (B.n != n) throw std::invalid_argument("lu_solve: size mismatch");
    std::vector<int> piv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) piv[static_cast<std::size_t>(i)] = i;

    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(A(col, col));
        for (int i = col + 1; i < n; ++i) {
            const double v = std::abs(A(i, col));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (p != col) {
            for (int j = 0; j < n; ++j) std::swap(A(col, j), A(p, j));
            for (int j = 0; j < n; ++j) std::swap(B(col, j), B(p, j));
        }
        const double inv_pivot = 1.0 / A(col, col);
        for (int i = col + 1; i < n; ++i) {
            const double f = A(i, col) * inv_pivot;
            if (f == 0.0) continue;
            A(i, col) = 0.0;
            for (int j = col + 1; j < n; ++j) A(i, j) -= f * A(col, j);
            for (int j = 0; j < n; ++j) B(i, j) -= f * B(col, j);
        }
    }
    // back substitution
    for (int col = n - 1; col >= 0; --col) {
        const double inv_pivot = 1.0 / A(col, col);
        for (int j = 0; j < n; ++j) B(col, j) *= inv_pivot;
        for (int i = col - 1; i >= 0; --i) {
            const double f = A(i, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) B(i, j) -= f * B(col, j);
        }
    }
    return B;
}

namespace detail {

inline void pade_uv_3(const DenseMatrix& A, DenseMatrix& U, DenseMatrix& V) {
    const double b[] = {120., 60., 12., 1.};
    const DenseMatrix I = DenseMatrix::identity(A.n);
    const DenseMatrix A2 = A * A;
    U = A * (b[3] * A2 + b[1] * I);
    V = b[2] * A2 + b[0] * I;
}

inline void pade_uv_5(const DenseMatrix& A, DenseMatrix& U, DenseMatrix& V) {
    const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const DenseMatrix I = DenseMatrix::identity(A.n);
    const DenseMatrix A2 = A * A;
    const DenseMatrix A4 = A2 * A2;
    U = A * (b[5] * A4 + b[3] * A2 + b[1] * I);
    V = b[4] * A4 + b[2] * A2 + b[0] * I;
}

inline void pade_uv_7(const DenseMatrix& A, DenseMatrix& U, DenseMatrix& V) {
    const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const DenseMatrix I = DenseMatrix::identity(A.n);
    const DenseMatrix A2 = A * A;
    const DenseMatrix A4 = A2 * A2;
    const DenseMatrix A6 = A4 * A2;
    U = A * (b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    V = b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

inline void pade_uv_9(const DenseMatrix& A, DenseMatrix& U, DenseMatrix& V) {
    const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                        2162160., 110880., 3960., 90., 1.};
    const DenseMatrix I = DenseMatrix::identity(A.n);
    const DenseMatrix A2 = A * A;
    const DenseMatrix A4 = A2 * A2;
    const DenseMatrix A6 = A4 * A2;
    const DenseMatrix A8 = A6 * A2;
    U = A * (b[9] * A8 + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    V = b[8] * A8 + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

inline void pade_uv_13(const DenseMatrix& A, DenseMatrix& U, DenseMatrix& V) {
    const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                        1187353796428800., 129060195264000., 10559470521600., 670442572800.,
                        33522128640., 1323241920., 40840800., 960960., 16380., 182., 1.};
    const DenseMatrix I = DenseMatrix::identity(A.n);
    const DenseMatrix A2 = A * A;
    const DenseMatrix A4 = A2 * A2;
    const DenseMatrix A6 = A4 * A2;
    U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
             b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
    V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
        b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

} // namespace detail

// e^A by Pade approximation with scaling and squaring.  Degree thresholds
// follow the standard double-precision table.
inline DenseMatrix expm(const DenseMatrix& A) {
    const double norm = A.l1_norm();
    DenseMatrix U(A.n), V(A.n);
    int squarings = 0;

    if (norm < 1.495585217958292e-2) {
        detail::pade_uv_3(A, U, V);
    } else if (norm < 2.539398330063230e-1) {
        detail::pade_uv_5(A, U, V);
    } else if (norm < 9.504178996162932e-1) {
        detail::pade_uv_7(A, U, V);
    } else if (norm < 2.097847961257068e0) {
        detail::pade_uv_9(A, U, V);
    } else {
        const double theta13 = 5.371920351148152;
        if (norm > theta13) {
            std::frexp(norm / theta13, &squarings);
            if (squarings < 0) squarings = 0;
        }
        DenseMatrix scaled = A;
        scaled *= std::ldexp(1.0, -squarings);
        detail::pade_uv_13(scaled, U, V);
    }

    DenseMatrix num = V;
    num += U;
    DenseMatrix den = V;
    den += -1.0 * U;
    DenseMatrix result = lu_solve(den, num);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

} // namespace hybridcd
