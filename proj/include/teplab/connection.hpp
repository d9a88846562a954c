#pragma once

#include <optional>
#include <vector>

#include "series.hpp"

namespace teplab {

enum class Field { Q, QI };

// Constant pairing on the fiber.  `sesquilinear_values` selects how pairings
// of series-valued sections are extended in the second slot (u -> -u) vs the
// u-linear extension; the covariant-constancy check does not depend on it.
struct Polarization {
    Matrix G;
    bool sesquilinear_values = false;
};

struct GradingData {
    Matrix mu;
};

// E-structure: rank-r free module over K[[u]] with connection
// nabla = d/du + u^{-2} sum_i A_i u^i.  A[0] is the residue.  Pole order is
// fixed at 2; higher-order poles are not representable by construction.
struct EStructure {
    size_t rank = 0;
    std::vector<Matrix> A;  // A[0..N]
    std::optional<Polarization> pol;
    std::optional<GradingData> grading;
    Field field = Field::QI;

    size_t order() const { return A.empty() ? 0 : A.size() - 1; }
    const Matrix& residue() const { return A.at(0); }

    static EStructure zero(size_t rank, size_t order) {
        EStructure e;
        e.rank = rank;
        e.A.assign(order + 1, Matrix(rank, rank));
        return e;
    }
    // The rank-1 structure E^{-w/u}: A = w / u^2.
    static EStructure exponential(const Scalar& w, size_t order) {
        EStructure e = zero(1, order);
        e.A[0](0, 0) = w;
        Polarization p;
        p.G = Matrix::identity(1);
        e.pol = p;
        return e;
    }

    MatrixSeries coefficient_series() const { return MatrixSeries(A); }
};

namespace detail {
// u^2 * d/du of a matrix series, computed index-wise so no order is lost:
// (u^2 S')_i = (i-1) * S_{i-1}.
inline MatrixSeries u2_derivative(const MatrixSeries& s, size_t rank) {
    (void)rank;
    size_t nr = s.size() ? s[0].rows() : 0, nc = s.size() ? s[0].cols() : 0;
    MatrixSeries d(std::vector<Matrix>(s.size(), Matrix(nr, nc)));
    for (size_t i = 1; i <= s.order(); i++)
        d[i] = Scalar(static_cast<long>(i) - 1) * s[i - 1];
    return d;
}
}  // namespace detail

// Basis change by P (P_0 invertible): Atilde = P^{-1} A P - P^{-1} dP/du,
// carried out on the u^{-2}-normalized coefficients.
inline EStructure gauge_transform(const MatrixSeries& P, const EStructure& E) {
    size_t N = std::min(P.order(), E.order());
    MatrixSeries Pt = P.truncated(N);
    MatrixSeries Pinv = Pt.inverse();  // throws NotAUnit if P_0 singular
    MatrixSeries A = MatrixSeries(E.A).truncated(N);
    MatrixSeries result = Pinv * A * Pt - Pinv * detail::u2_derivative(Pt, E.rank);
    EStructure out = E;
    out.A = result.coeffs();
    return out;
}

// Splitting change by an R-matrix (R_0 = Id): A^{s2} = R^{-1} A R + R^{-1} dR/du.
inline EStructure splitting_change(const MatrixSeries& R, const EStructure& E) {
    if (R.size() == 0 || R[0] != Matrix::identity(E.rank))
        throw Inconsistent("splitting_change requires R_0 = Id");
    size_t N = std::min(R.order(), E.order());
    MatrixSeries Rt = R.truncated(N);
    MatrixSeries Rinv = Rt.inverse();
    MatrixSeries A = MatrixSeries(E.A).truncated(N);
    MatrixSeries result = Rinv * A * Rt + Rinv * detail::u2_derivative(Rt, E.rank);
    EStructure out = E;
    out.A = result.coeffs();
    return out;
}

// Column-vector series: rank x 1 matrices per power of u.
using VectorSeries = MatrixSeries;

inline VectorSeries vector_series(const std::vector<std::vector<Scalar>>& coeffs) {
    VectorSeries v;
    std::vector<Matrix> cols;
    for (const auto& c : coeffs) {
        Matrix m(c.size(), 1);
        for (size_t r = 0; r < c.size(); r++) m(r, 0) = c[r];
        cols.push_back(std::move(m));
    }
    return VectorSeries(cols);
}

// u^2 nabla v = u^2 v' + (sum A_i u^i) v.
inline VectorSeries apply_connection(const EStructure& E, const VectorSeries& v) {
    size_t N = std::min(v.order(), E.order());
    VectorSeries vt = v.truncated(N);
    MatrixSeries A = MatrixSeries(E.A).truncated(N);
    return A * vt + detail::u2_derivative(vt, E.rank);
}

// Tensor with E^{-w/u}: shifts the residue by w * Id.
inline EStructure twist(const EStructure& E, const Scalar& w) {
    EStructure out = E;
    out.A[0] += Matrix::scalar(E.rank, w);
    return out;
}

struct PolarizationReport {
    bool pass = true;
    long first_failing_order = -1;
};

// Covariant constancy of the pairing under nabla_{u du}: order by order this
// is the identity A_i^T G = (-1)^i G A_i.
inline PolarizationReport check_polarization(const EStructure& E) {
    if (!E.pol) throw Inconsistent("E-structure carries no polarization");
    const Matrix& G = E.pol->G;
    PolarizationReport rep;
    for (size_t i = 0; i < E.A.size(); i++) {
        Matrix lhs = E.A[i].transpose() * G;
        Matrix rhs = (i % 2 == 0) ? G * E.A[i] : -(G * E.A[i]);
        if (lhs != rhs) {
            rep.pass = false;
            rep.first_failing_order = static_cast<long>(i);
            break;
        }
    }
    return rep;
}

// E-structure of an Euler-graded pre-TE-structure over a point base:
// nabla = d/du + (Gr/2)/u + E_action/u^2.
inline EStructure euler_te_extension(const Matrix& Gr_fiber, const Matrix& E_action,
                                     size_t order) {
    if (!Gr_fiber.is_square() || Gr_fiber.rows() != E_action.rows() ||
        !E_action.is_square())
        throw Inconsistent("euler_te_extension expects square matrices of equal rank");
    EStructure e = EStructure::zero(Gr_fiber.rows(), order);
    e.A[0] = E_action;
    e.A[1] = Gr_fiber * Scalar(1, 2);
    return e;
}

// A splitting in the working frame: matrix series whose constant term is Id
// after frame normalization.  Constant splittings are order-0 series.
struct Splitting {
    MatrixSeries S;

    static Splitting constant(const Matrix& m) {
        return Splitting{MatrixSeries(std::vector<Matrix>{m})};
    }
    static Splitting identity(size_t rank, size_t order = 0) {
        return Splitting{matrix_series_identity(rank, order)};
    }
};

// R-matrix between two splittings: R = Phi_{s1}^{-1} o Phi_{s2} = S1^{-1} S2
// as matrix series.  E is used only for validity checks.
inline MatrixSeries rmatrix_between_splittings(const Splitting& s1, const Splitting& s2,
                                               const EStructure& E, size_t order) {
    auto check = [&](const MatrixSeries& S) {
        if (S.size() == 0 || S[0].rows() != E.rank)
            throw Inconsistent("splitting rank mismatch");
        if (S[0] != Matrix::identity(E.rank))
            throw Inconsistent("splitting not frame-normalized (S_0 != Id)");
    };
    check(s1.S);
    check(s2.S);
    auto pad = [&](const MatrixSeries& S) {
        MatrixSeries p = matrix_series_zero(E.rank, order);
        for (size_t k = 0; k <= order && k < S.size(); k++) p[k] = S[k];
        return p;
    };
    return pad(s1.S).inverse() * pad(s2.S);
}

}  // namespace teplab
