#pragma once

#include <string>
#include <vector>

#include "normalform.hpp"

namespace teplab {

// Small quantum cohomology input data: basis with cohomological degrees p,
// first-Chern-class multiplication matrix, Poincare pairing, complex
// dimension n.  mu = diag((p - n)/2).
struct QuantumData {
    size_t rank = 0;
    std::vector<std::string> labels;
    std::vector<long> degrees;
    Matrix c1;       // matrix of c_1(X) *
    Matrix pairing;  // Poincare pairing
    long dim = 0;    // complex dimension n

    Matrix mu() const {
        std::vector<Scalar> d;
        for (long p : degrees) d.push_back(Scalar(p - dim, 2));
        return Matrix::diagonal(d);
    }
};

struct QuantumEStructure {
    EStructure E;
    QuantumData data;
    std::string preset_name;
};

inline QuantumData preset(const std::string& name) {
    QuantumData q;
    if (name == "s2") {
        q.rank = 2;
        q.labels = {"1", "H"};
        q.degrees = {0, 2};
        q.dim = 1;
        q.c1 = {{Scalar(0), Scalar(2)}, {Scalar(2), Scalar(0)}};
        q.pairing = {{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}};
        return q;
    }
    if (name == "quadric-intersection-cp5") {
        q.rank = 4;
        q.labels = {"1", "H", "H^2", "H^3"};
        q.degrees = {0, 2, 4, 6};
        q.dim = 3;
        q.c1 = {{Scalar(0), Scalar(8), Scalar(0), Scalar(32)},
                {Scalar(2), Scalar(0), Scalar(16), Scalar(0)},
                {Scalar(0), Scalar(2), Scalar(0), Scalar(8)},
                {Scalar(0), Scalar(0), Scalar(2), Scalar(0)}};
        q.pairing = Matrix(4, 4);
        for (size_t k = 0; k < 4; k++) q.pairing(k, 3 - k) = Scalar(4);
        return q;
    }
    throw UnknownPreset("no preset named '" + name + "'");
}

// E-structure of the small quantum connection: nabla = d/du + mu/u + c1*/u^2,
// with the Poincare pairing attached (u-linear series extension by default).
inline QuantumEStructure build_quantum(const QuantumData& q, size_t order = 8) {
    if (q.degrees.size() != q.rank || q.c1.rows() != q.rank || !q.c1.is_square())
        throw Inconsistent("quantum data shape mismatch");
    Matrix mu = q.mu();
    for (size_t k = 0; k < q.rank; k++)
        if (mu(k, k) != Scalar(q.degrees[k] - q.dim, 2))
            throw BadGrading("mu does not match the degree table");
    if (q.pairing.rank() != q.rank)
        throw Inconsistent("Poincare pairing is degenerate");
    // Frobenius property: c1* self-adjoint for the pairing.
    if (q.c1.transpose() * q.pairing != q.pairing * q.c1)
        throw Inconsistent("c1* is not self-adjoint for the pairing");

    QuantumEStructure out;
    out.data = q;
    out.E = euler_te_extension(Scalar(2) * mu, q.c1, order);
    out.E.pol = Polarization{q.pairing, false};
    out.E.grading = GradingData{mu};
    return out;
}

struct TelemanResult {
    MatrixSeries R;       // in the eigenframe (columns of C)
    EigenBlockData eigen; // frame data: C, blocks, eigenvalues
    Matrix mu_eigen;      // mu conjugated into the eigenframe
};

// Givental-Teleman R-matrix from the recursion [xi, R_{i+1}] + (mu + i) R_i = 0,
// diagonal blocks pinned by the next order's solvability.
inline TelemanResult teleman_rmatrix(const QuantumEStructure& Q, size_t N) {
    const EStructure& E = Q.E;
    EigenBlockData eb = generalized_eigenblocks(E.residue(), E.field);
    size_t n = E.rank;
    Matrix xi = eb.C.inverse() * E.residue() * eb.C;
    for (const auto& b : eb.blocks) {
        Matrix blk(b.mult, b.mult);
        for (size_t r = 0; r < b.mult; r++)
            for (size_t c = 0; c < b.mult; c++) blk(r, c) = xi(b.begin + r, b.begin + c);
        if (blk != Matrix::scalar(b.mult, b.w))
            throw NotSemisimple("residue not diagonalizable at eigenvalue " + b.w.str());
    }
    Matrix mu = eb.C.inverse() * Q.data.mu() * eb.C;
    if (!detail::diag_part(mu, eb.blocks).is_zero())
        throw MuPropertyFailed("mu has nonzero diagonal blocks in the eigenframe");

    MatrixSeries R = matrix_series_identity(n, N);
    for (size_t i = 0; i + 1 <= N; i++) {
        Matrix rhs = -((mu + Matrix::scalar(n, Scalar(static_cast<long>(i)))) * R[i]);
        if (!detail::diag_part(rhs, eb.blocks).is_zero())
            throw MuPropertyFailed("solvability fails at order " + std::to_string(i + 1));
        Matrix off = sylvester_offdiag_solve(xi, detail::offdiag_part(rhs, eb.blocks),
                                             eb.blocks);
        Matrix diag = Scalar(-1) * Scalar(1, static_cast<long>(i) + 1) *
                      detail::diag_part(mu * off, eb.blocks);
        R[i + 1] = off + diag;
    }
    return {R, eb, mu};
}

struct FlatFrameEntry {
    VectorSeries v;  // in the original (GW) frame
    Scalar w;
};

// Order-by-order solution of u^2 nabla v = w v with v_0 = seed.  Specific to
// the quantum shape A = c1/u^2 + mu/u: the w-eigenspace component of v_m is
// pinned by the order-(m+1) solvability condition.
inline FlatFrameEntry flat_sections_ode(const QuantumEStructure& Q, const Scalar& w,
                                        const std::vector<Scalar>& seed, size_t N) {
    const EStructure& E = Q.E;
    size_t n = E.rank;
    for (size_t i = 2; i < E.A.size(); i++)
        if (!E.A[i].is_zero())
            throw Inconsistent("flat_sections_ode expects a quantum-shape connection");
    EigenBlockData eb = generalized_eigenblocks(E.residue(), E.field);
    Matrix xi = eb.C.inverse() * E.residue() * eb.C;
    Matrix mu = eb.C.inverse() * E.A[1] * eb.C;
    Matrix Cinv = eb.C.inverse();

    const EigenBlock* wblock = nullptr;
    for (const auto& b : eb.blocks)
        if (b.w == w) wblock = &b;
    if (!wblock) throw Inconsistent("w is not an eigenvalue of the residue");
    auto in_w = [&](size_t r) {
        return r >= wblock->begin && r < wblock->begin + wblock->mult;
    };

    Matrix s(n, 1);
    for (size_t r = 0; r < n; r++) s(r, 0) = seed[r];
    Matrix v0 = Cinv * s;
    {
        Matrix chk = xi * v0 - Scalar(w) * v0;
        if (!chk.is_zero()) throw Inconsistent("seed is not a w-eigenvector");
    }

    std::vector<Matrix> v(N + 1, Matrix(n, 1));
    v[0] = v0;
    for (size_t m = 1; m <= N; m++) {
        Matrix rhs = -((mu + Matrix::scalar(n, Scalar(static_cast<long>(m) - 1))) *
                       v[m - 1]);
        // off-eigenspace rows: (xi - w) v_m = rhs, solvable per block
        Matrix vm(n, 1);
        for (const auto& b : eb.blocks) {
            if (b.w == w) {
                for (size_t r = 0; r < b.mult; r++)
                    if (!rhs(b.begin + r, 0).is_zero())
                        throw Obstructed("order-" + std::to_string(m) +
                                         " system unsolvable (mu-property fails)");
                continue;
            }
            Matrix blk(b.mult, b.mult);
            std::vector<Scalar> br(b.mult);
            for (size_t r = 0; r < b.mult; r++) {
                br[r] = rhs(b.begin + r, 0);
                for (size_t c = 0; c < b.mult; c++)
                    blk(r, c) = xi(b.begin + r, b.begin + c) -
                                (r == c ? w : Scalar(0));
            }
            auto sol = solve_unique(blk, br);
            for (size_t r = 0; r < b.mult; r++) vm(b.begin + r, 0) = sol[r];
        }
        // w-rows pinned by the next order: pi_w v_m = -pi_w(mu v_m^off)/m
        Matrix muv = mu * vm;
        for (size_t r = 0; r < n; r++)
            if (in_w(r)) vm(r, 0) = -muv(r, 0) / Scalar(static_cast<long>(m));
        v[m] = vm;
    }

    std::vector<Matrix> out;
    for (const auto& vm : v) out.push_back(eb.C * vm);
    return {VectorSeries(out), w};
}

// Gromov-Witten splitting: constant sections, identity in the working frame.
inline Splitting gw_splitting(const QuantumEStructure& Q) {
    return Splitting::identity(Q.E.rank);
}

}  // namespace teplab
