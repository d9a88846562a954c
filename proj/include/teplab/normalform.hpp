#pragma once

#include <vector>

#include "levelt.hpp"

namespace teplab {

struct FlattenResult {
    MatrixSeries Q;       // gauge with gauge_transform(Q, Ew) = w/u^2 * Id
    bool certificate_ok;  // re-checked by gauge_transform
    Scalar w;
};

// Turrittin case 1: residue w*Id, no u^{-1} term.  Write A = w + u^2 B(u);
// the gauge Q solves dQ/du = B Q order by order: (k+1) Q_{k+1} = sum B_j Q_{k-j}.
inline FlattenResult flatten_scalar_block(const EStructure& Ew, size_t N) {
    size_t n = Ew.rank;
    Scalar w = Ew.residue()(0, 0);
    if (Ew.residue() != Matrix::scalar(n, w))
        throw ResidueNotScalar("residue is not a scalar matrix");
    if (Ew.order() >= 1 && !Ew.A[1].is_zero())
        throw NonzeroSubleading("u^{-1} coefficient does not vanish");

    auto B = [&](size_t j) {  // B_j = A_{j+2}; zero beyond stored order
        return j + 2 < Ew.A.size() ? Ew.A[j + 2] : Matrix(n, n);
    };
    MatrixSeries Q = matrix_series_identity(n, N);
    for (size_t k = 0; k + 1 <= N; k++) {
        Matrix acc(n, n);
        for (size_t j = 0; j <= k; j++) acc += B(j) * Q[k - j];
        Q[k + 1] = Scalar(1, static_cast<long>(k) + 1) * acc;
    }

    EStructure padded = Ew;
    padded.A.resize(N + 1, Matrix(n, n));
    EStructure flat = gauge_transform(Q, padded);
    bool ok = true;
    for (size_t i = 0; i < flat.A.size(); i++)
        if (flat.A[i] != (i == 0 ? Matrix::scalar(n, w) : Matrix(n, n))) ok = false;
    return {Q, ok, w};
}

struct SemisimplifyResult {
    MatrixSeries gauge;            // full gauge to the direct sum of E^{-w/u}
    std::vector<Scalar> weights;   // per-coordinate eigenvalues, grouped order
    bool certificate_ok;
};

// Isomorphism to a direct sum of E^{-w/u}: block-diagonalize, then flatten
// each block.  The residue must be diagonalizable over the working field.
inline SemisimplifyResult semisimplify(const EStructure& E, size_t N) {
    BlockDecomposition bd = block_diagonalize(E, N);
    size_t n = E.rank;
    for (size_t bi = 0; bi < bd.sub.size(); bi++) {
        const auto& blk = bd.eigen.blocks[bi];
        if (bd.sub[bi].residue() != Matrix::scalar(blk.mult, blk.w))
            throw NotSemisimple("residue has a nontrivial Jordan block at eigenvalue " +
                                blk.w.str());
    }
    MatrixSeries Qfull = matrix_series_identity(n, N);
    std::vector<Scalar> weights(n);
    for (size_t bi = 0; bi < bd.sub.size(); bi++) {
        const auto& blk = bd.eigen.blocks[bi];
        FlattenResult f = flatten_scalar_block(bd.sub[bi], N);
        for (size_t k = 0; k <= N; k++)
            for (size_t r = 0; r < blk.mult; r++)
                for (size_t c = 0; c < blk.mult; c++)
                    Qfull[k](blk.begin + r, blk.begin + c) =
                        k < f.Q.size() ? f.Q[k](r, c) : Scalar(0);
        for (size_t r = 0; r < blk.mult; r++) weights[blk.begin + r] = blk.w;
    }
    MatrixSeries total = (bd.P * Qfull).truncated(N);

    EStructure padded = E;
    padded.A.resize(N + 1, Matrix(n, n));
    EStructure flat = gauge_transform(total, padded);
    bool ok = true;
    for (size_t i = 0; i < flat.A.size(); i++) {
        Matrix want(n, n);
        if (i == 0) want = Matrix::diagonal(weights);
        if (flat.A[i] != want) ok = false;
    }
    return {total, weights, ok};
}

// Unique R with R_0 = Id solving [xi, R_{k+1}] = R_k (mu - k).  Off-diagonal
// blocks come from the Sylvester solve; diagonal blocks are pinned by the
// next order's solvability condition: diag(R_{k+1}) = diag(R_{k+1}^off mu)/(k+1).
inline MatrixSeries rmatrix_from_grading(const Matrix& xi, const Matrix& mu, size_t N,
                                         Field field = Field::QI) {
    (void)field;
    size_t n = xi.rows();
    // The pinning rule needs xi in an eigen-grouped frame; we require it
    // diagonal with equal eigenvalues contiguous (runs give the blocks).
    for (size_t r = 0; r < n; r++)
        for (size_t c = 0; c < n; c++)
            if (r != c && !xi(r, c).is_zero())
                throw Inconsistent("xi must be diagonal in the working frame");
    EigenBlockData eb;
    for (size_t k = 0; k < n;) {
        size_t j = k;
        while (j < n && xi(j, j) == xi(k, k)) j++;
        eb.blocks.push_back({xi(k, k), j - k, k});
        k = j;
    }
    for (size_t a = 0; a < eb.blocks.size(); a++)
        for (size_t b = a + 1; b < eb.blocks.size(); b++)
            if (eb.blocks[a].w == eb.blocks[b].w)
                throw Inconsistent("equal xi eigenvalues must be contiguous");
    if (!detail::diag_part(mu, eb.blocks).is_zero())
        throw BadGrading("mu is not xi-compatible (diagonal blocks nonzero)");

    MatrixSeries R = matrix_series_identity(n, N);
    for (size_t k = 0; k + 1 <= N; k++) {
        Matrix rhs = R[k] * (mu - Matrix::scalar(n, Scalar(static_cast<long>(k))));
        if (!detail::diag_part(rhs, eb.blocks).is_zero())
            throw Inconsistent("diagonal-block solvability fails at order " +
                               std::to_string(k + 1));
        Matrix off = sylvester_offdiag_solve(xi, detail::offdiag_part(rhs, eb.blocks),
                                             eb.blocks);
        Matrix diag = Scalar(1, static_cast<long>(k) + 1) *
                      detail::diag_part(off * mu, eb.blocks);
        R[k + 1] = off + diag;
    }
    return R;
}

struct IsomorphismSolution {
    MatrixSeries R;       // particular solution with R_0 = Id, to order N
    size_t kernel_dim;    // solution-space dimension after lookahead, orders <= N
    std::vector<MatrixSeries> kernel;  // basis of the homogeneous part
};

// Global exact linear solve for R with R_0 = Id and
//   u^2 dR/du = R (u^2 A2) - (u^2 A1) R
// i.e. the Appendix-B recursion [A2_0, R_{i+1}] = R_i(A2_1 - i) - A1_1 R_i in
// the pole-order-2 case, generalized to arbitrary coefficient series.
inline IsomorphismSolution isomorphism_solve_full(const EStructure& E1,
                                                  const EStructure& E2, size_t N,
                                                  size_t lookahead = 2) {
    if (E1.rank != E2.rank || E1.field != E2.field)
        throw Inconsistent("isomorphism_solver requires equal rank and field");
    size_t n = E1.rank;
    // Pinning an undetermined component at order k can require solvability
    // conditions up to k + 1 + (longest Jordan chain of the residue): the
    // chain length is bounded by the rank, so pad the internal system by
    // n - 1 orders and let `lookahead` count genuine extra orders beyond
    // the generic next-order pinning.
    size_t M = N + lookahead + (n > 0 ? n - 1 : 0);
    auto Acoef = [&](const EStructure& e, size_t i) {
        return i < e.A.size() ? e.A[i] : Matrix(n, n);
    };
    // unknowns: R_1..R_M; R_0 = Id enters the right-hand side.
    auto idx = [&](size_t k, size_t r, size_t c) {
        return (k - 1) * n * n + r * n + c;
    };
    size_t nunk = M * n * n;
    Matrix sys((M + 1) * n * n, nunk);
    std::vector<Scalar> rhs((M + 1) * n * n);
    for (size_t m = 0; m <= M; m++)
        for (size_t r = 0; r < n; r++)
            for (size_t c = 0; c < n; c++) {
                size_t row = m * n * n + r * n + c;
                // (m-1) R_{m-1} - sum_{k+i=m} (R_k A2_i - A1_i R_k) = 0
                auto add = [&](size_t k, size_t rr, size_t cc, const Scalar& v) {
                    if (k == 0) {
                        if (rr == cc) rhs[row] -= v;  // R_0 = Id
                    } else {
                        sys(row, idx(k, rr, cc)) += v;
                    }
                };
                if (m >= 1) add(m - 1, r, c, Scalar(static_cast<long>(m) - 1));
                for (size_t k = 0; k <= m; k++) {
                    Matrix A2i = Acoef(E2, m - k), A1i = Acoef(E1, m - k);
                    for (size_t j = 0; j < n; j++) {
                        add(k, r, j, -A2i(j, c));
                        add(k, j, c, A1i(r, j));
                    }
                }
            }

    AffineSolution sol = solve_affine(sys, rhs);  // throws NoSolution
    auto extract = [&](const std::vector<Scalar>& v, bool with_id) {
        std::vector<Matrix> coeffs(N + 1, Matrix(n, n));
        if (with_id) coeffs[0] = Matrix::identity(n);
        for (size_t k = 1; k <= N; k++)
            for (size_t r = 0; r < n; r++)
                for (size_t c = 0; c < n; c++) coeffs[k](r, c) = v[idx(k, r, c)];
        return MatrixSeries(std::move(coeffs));
    };
    IsomorphismSolution out;
    out.R = extract(sol.particular, true);
    // Kernel directions that still matter after truncating to order N.
    Matrix proj(sol.kernel.size(), N * n * n);
    for (size_t b = 0; b < sol.kernel.size(); b++)
        for (size_t k = 0; k < N * n * n; k++) proj(b, k) = sol.kernel[b][k];
    auto pivots = proj.rref();
    out.kernel_dim = pivots.size();
    for (size_t b = 0; b < pivots.size(); b++) {
        std::vector<Scalar> v(nunk);
        for (size_t k = 0; k < N * n * n; k++) v[k] = proj(b, k);
        out.kernel.push_back(extract(v, false));
    }
    return out;
}

inline MatrixSeries isomorphism_solver(const EStructure& E1, const EStructure& E2,
                                       size_t N, size_t lookahead = 2) {
    IsomorphismSolution sol = isomorphism_solve_full(E1, E2, N, lookahead);
    if (sol.kernel_dim != 0)
        throw NonUnique("solution space has dimension " + std::to_string(sol.kernel_dim));
    return sol.R;
}

struct SplittingKind {
    bool p_compatible = false;
    bool homogeneous = false;
    bool omega_compatible = false;
    bool block_preserving = false;
};

// Report-valued classification of a splitting per the three conditions of the
// semi-simple splitting definition, plus block preservation.
inline SplittingKind check_splitting_kind(const Splitting& s, const EStructure& E,
                                          const std::vector<Scalar>& omega) {
    size_t n = E.rank;
    size_t N = E.order();
    MatrixSeries S = matrix_series_zero(n, N);
    for (size_t k = 0; k <= N && k < s.S.size(); k++) S[k] = s.S[k];
    if (S[0] != Matrix::identity(n))
        throw Inconsistent("splitting not frame-normalized");
    SplittingKind out;

    // Homogeneous <=> connection matrix in the s-frame has A_i = 0, i >= 2.
    EStructure Es = splitting_change(S, E);
    out.homogeneous = true;
    for (size_t i = 2; i < Es.A.size(); i++)
        if (!Es.A[i].is_zero()) out.homogeneous = false;

    // P-compatible: pairing of columns reproduces the constant pairing.
    if (E.pol) {
        const Matrix& G = E.pol->G;
        bool sesq = E.pol->sesquilinear_values;
        out.p_compatible = true;
        for (size_t k = 0; k <= N; k++) {
            Matrix acc(n, n);
            for (size_t i = 0; i <= k; i++) {
                Matrix term = S[i].transpose() * G * S[k - i];
                if (sesq && (k - i) % 2 == 1) term = -term;
                acc += term;
            }
            if (acc != (k == 0 ? G : Matrix(n, n))) out.p_compatible = false;
        }
    }

    // omega-compatible: nabla_{u d/du} s(w) = r s(w) + u^{-1} s(a) solvable.
    {
        Matrix w(n, 1);
        for (size_t r = 0; r < n; r++) w(r, 0) = omega[r];
        // X = u^{-1} A(u) S(u) w + u (S(u) w)'; Laurent coefficients x_{-1}..x_{N-1}
        std::vector<Matrix> Swc(N + 1, Matrix(n, 1));
        for (size_t k = 0; k <= N; k++) Swc[k] = S[k] * w;
        MatrixSeries ASw = MatrixSeries(E.A).truncated(N) * MatrixSeries(Swc);
        // x_k (k from -1): A-part gives ASw_{k+1}; u(Sw)' gives k*Swc_k (k>=0)
        size_t unknowns = 1 + n;  // r and a
        Matrix sys((N + 1) * n, unknowns);
        std::vector<Scalar> rhs((N + 1) * n);
        for (long k = -1; k + 1 <= static_cast<long>(N); k++) {
            for (size_t row = 0; row < n; row++) {
                size_t eq = static_cast<size_t>(k + 1) * n + row;
                Scalar x = ASw[static_cast<size_t>(k + 1)](row, 0);
                if (k >= 0)
                    x += Scalar(k) * Swc[static_cast<size_t>(k)](row, 0);
                rhs[eq] = x;
                if (k >= 0) sys(eq, 0) = Swc[static_cast<size_t>(k)](row, 0);  // r
                for (size_t c = 0; c < n; c++)
                    sys(eq, 1 + c) = S[static_cast<size_t>(k + 1)](row, c);  // a
            }
        }
        try {
            solve_affine(sys, rhs);
            out.omega_compatible = true;
        } catch (const NoSolution&) {
            out.omega_compatible = false;
        }
    }

    // Block preservation: P^{-1} S maps each eigenspace into its block rows.
    try {
        BlockDecomposition bd = block_diagonalize(E, N);
        MatrixSeries D = bd.P.inverse() * S;
        out.block_preserving = true;
        for (const auto& b : bd.eigen.blocks) {
            // eigenspace basis: columns b.begin..b.begin+mult-1 of C, i.e.
            // in the P-frame the image must live in the block coordinate range.
            for (size_t k = 0; k <= N; k++) {
                Matrix img = D[k] * bd.eigen.C;
                for (size_t c = b.begin; c < b.begin + b.mult; c++)
                    for (size_t r = 0; r < n; r++)
                        if (!(r >= b.begin && r < b.begin + b.mult) &&
                            !img(r, c).is_zero())
                            out.block_preserving = false;
            }
        }
    } catch (const Error&) {
        out.block_preserving = false;
    }
    return out;
}

}  // namespace teplab
