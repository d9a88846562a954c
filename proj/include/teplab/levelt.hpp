#pragma once

#include <vector>

#include "roots.hpp"

namespace teplab {

struct EigenBlock {
    Scalar w;
    size_t mult;
    size_t begin;  // first index of the block in the eigen-grouped frame
};

struct EigenBlockData {
    std::vector<EigenBlock> blocks;
    Matrix C;  // columns: generalized eigenbasis, grouped by eigenvalue
};

// Group the generalized eigenspaces of A0, eigenvalues sorted by (re, im).
inline EigenBlockData generalized_eigenblocks(const Matrix& A0, Field field = Field::QI) {
    if (!A0.is_square()) throw Inconsistent("residue must be square");
    size_t n = A0.rows();
    auto spec = spectrum(A0, field);
    EigenBlockData out;
    out.C = Matrix(n, n);
    size_t col = 0;
    for (const auto& ev : spec) {
        // kernel of (A0 - w)^mult spans the generalized eigenspace.
        Matrix B = A0 - Matrix::scalar(n, ev.value);
        Matrix Bp = Matrix::identity(n);
        for (size_t k = 0; k < ev.multiplicity; k++) Bp = Bp * B;
        auto basis = Bp.kernel_basis();
        if (basis.size() != ev.multiplicity)
            throw InternalSingular("generalized eigenspace dimension mismatch");
        out.blocks.push_back({ev.value, ev.multiplicity, col});
        for (const auto& v : basis) {
            for (size_t r = 0; r < n; r++) out.C(r, col) = v[r];
            col++;
        }
    }
    return out;
}

namespace detail {

// Zero out the diagonal blocks of M in the eigen-grouped frame.
inline Matrix offdiag_part(const Matrix& M, const std::vector<EigenBlock>& blocks) {
    Matrix out = M;
    for (const auto& b : blocks)
        for (size_t r = b.begin; r < b.begin + b.mult; r++)
            for (size_t c = b.begin; c < b.begin + b.mult; c++)
                out(r, c) = Scalar(0);
    return out;
}

inline Matrix diag_part(const Matrix& M, const std::vector<EigenBlock>& blocks) {
    return M - offdiag_part(M, blocks);
}

}  // namespace detail

// Solve [A0, T] = Cmat on the off-diagonal blocks, T in W_{A0} (zero diagonal
// blocks).  A0 must be block-grouped; the restriction of ad_{A0} to W_{A0} is
// an isomorphism because block spectra are disjoint.
inline Matrix sylvester_offdiag_solve(const Matrix& A0, const Matrix& Cmat,
                                      const std::vector<EigenBlock>& blocks) {
    size_t n = A0.rows();
    Matrix T(n, n);
    for (const auto& bi : blocks)
        for (const auto& bj : blocks) {
            if (bi.begin == bj.begin) continue;
            size_t p = bi.mult, q = bj.mult;
            // vec(T_ij) system: (I_q (x) Aii - Ajj^T (x) I_p) vec = vec(C_ij)
            Matrix M(p * q, p * q);
            std::vector<Scalar> rhs(p * q);
            for (size_t r = 0; r < p; r++)
                for (size_t c = 0; c < q; c++) {
                    size_t row = c * p + r;
                    rhs[row] = Cmat(bi.begin + r, bj.begin + c);
                    for (size_t k = 0; k < p; k++)
                        M(row, c * p + k) += A0(bi.begin + r, bi.begin + k);
                    for (size_t k = 0; k < q; k++)
                        M(row, k * p + r) -= A0(bj.begin + k, bj.begin + c);
                }
            std::vector<Scalar> sol;
            try {
                sol = solve_unique(M, rhs);
            } catch (const Error&) {
                throw InternalSingular("ad_{A0} not invertible on an off-diagonal block");
            }
            for (size_t r = 0; r < p; r++)
                for (size_t c = 0; c < q; c++)
                    T(bi.begin + r, bj.begin + c) = sol[c * p + r];
        }
    return T;
}

struct BlockDecomposition {
    EigenBlockData eigen;
    MatrixSeries P;          // full gauge C * prod(Id + u^m T_m), to order N
    EStructure transformed;  // block-diagonal connection in the P-frame
    std::vector<EStructure> sub;  // per-eigenvalue sub-E-structures
};

// Hukuhara-Levelt-Turrittin step: kill the off-diagonal blocks of the
// connection order by order with T_m in W_{A0}.
inline BlockDecomposition block_diagonalize(const EStructure& E, size_t N) {
    BlockDecomposition out;
    out.eigen = generalized_eigenblocks(E.residue(), E.field);
    size_t n = E.rank;

    MatrixSeries P = matrix_series_zero(n, N);
    P[0] = out.eigen.C;
    EStructure cur = E;
    if (cur.order() > N) cur.A.resize(N + 1);
    cur = gauge_transform(P, cur);

    for (size_t m = 1; m <= cur.order(); m++) {
        Matrix off = detail::offdiag_part(cur.A[m], out.eigen.blocks);
        if (off.is_zero()) continue;
        // want [A0, T_m] = -off so that A_m + [A0,T_m] is block-diagonal
        Matrix T = sylvester_offdiag_solve(cur.A[0], -off, out.eigen.blocks);
        MatrixSeries step = matrix_series_identity(n, cur.order());
        step[m] = T;
        cur = gauge_transform(step, cur);
        P = (P * step).truncated(N);
    }

    out.P = P;
    out.transformed = cur;
    for (const auto& b : out.eigen.blocks) {
        EStructure sub;
        sub.rank = b.mult;
        sub.field = E.field;
        for (const auto& Ai : cur.A) {
            Matrix blk(b.mult, b.mult);
            for (size_t r = 0; r < b.mult; r++)
                for (size_t c = 0; c < b.mult; c++)
                    blk(r, c) = Ai(b.begin + r, b.begin + c);
            sub.A.push_back(std::move(blk));
        }
        out.sub.push_back(std::move(sub));
    }
    return out;
}

// Basis of matrix series F with u^2 dF/du = A2 F - F A1 (both connection
// matrices taken with their u^{-2} pole), i.e. morphisms E1 -> E2, computed
// to order N as one global exact linear solve with the given lookahead.
// Missing high-order coefficients of the inputs count as zero.
inline std::vector<MatrixSeries> hom_solver(const EStructure& E1, const EStructure& E2,
                                            size_t N, size_t lookahead = 2) {
    if (E1.field != E2.field) throw Inconsistent("hom_solver requires equal fields");
    size_t r1 = E1.rank, r2 = E2.rank;
    // Pad past the requested lookahead so that truncation artifacts (top
    // coefficients only weakly constrained, with Jordan chains delaying the
    // pinning) stay above order N; the chain lengths are bounded by the ranks.
    size_t M = N + lookahead + (r1 > 0 ? r1 - 1 : 0) + (r2 > 0 ? r2 - 1 : 0);
    size_t nunk = (M + 1) * r2 * r1;   // F_0..F_M, each r2 x r1
    auto Acoef = [&](const EStructure& e, size_t i) {
        return i < e.A.size() ? e.A[i] : Matrix(e.rank, e.rank);
    };
    auto idx = [&](size_t k, size_t r, size_t c) { return k * r2 * r1 + r * r1 + c; };

    Matrix sys((M + 1) * r2 * r1, nunk);
    for (size_t m = 0; m <= M; m++)
        for (size_t r = 0; r < r2; r++)
            for (size_t c = 0; c < r1; c++) {
                size_t row = idx(m, r, c);
                // sum_{k+i=m} (F_k A1_i - A2_i F_k) + (m-1) F_{m-1} = 0,
                // i.e. u^2 F' = A2 F - F A1: the sections map P^{-1} of
                // gauge_transform(P, .) solves it, so gauge images are homs.
                for (size_t k = 0; k <= m; k++) {
                    Matrix A1i = Acoef(E1, m - k), A2i = Acoef(E2, m - k);
                    for (size_t j = 0; j < r1; j++)
                        sys(row, idx(k, r, j)) += A1i(j, c);
                    for (size_t j = 0; j < r2; j++)
                        sys(row, idx(k, j, c)) -= A2i(r, j);
                }
                if (m >= 1)
                    sys(row, idx(m - 1, r, c)) += Scalar(static_cast<long>(m) - 1);
            }

    auto basis = sys.kernel_basis();
    // Project to orders 0..N and prune directions that became dependent.
    Matrix proj(basis.size(), (N + 1) * r2 * r1);
    for (size_t b = 0; b < basis.size(); b++)
        for (size_t k = 0; k < (N + 1) * r2 * r1; k++) proj(b, k) = basis[b][k];
    auto pivots = proj.rref();
    std::vector<MatrixSeries> out;
    for (size_t b = 0; b < pivots.size(); b++) {
        std::vector<Matrix> coeffs(N + 1, Matrix(r2, r1));
        for (size_t k = 0; k <= N; k++)
            for (size_t r = 0; r < r2; r++)
                for (size_t c = 0; c < r1; c++)
                    coeffs[k](r, c) = proj(b, idx(k, r, c));
        out.emplace_back(std::move(coeffs));
    }
    return out;
}

}  // namespace teplab
