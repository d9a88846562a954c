#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "teplab/levelt.hpp"
#include "teplab/quantum.hpp"

using namespace teplab;

namespace {
std::mt19937 rng(20240817);
Scalar rs() {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    return Scalar(num(rng), den(rng));
}
Matrix rmat(size_t n) {
    Matrix m(n, n);
    for (size_t r = 0; r < n; r++)
        for (size_t c = 0; c < n; c++) m(r, c) = rs();
    return m;
}
// random invertible matrix with small integer entries
Matrix runimod(size_t n) {
    std::uniform_int_distribution<int> e(-2, 2);
    while (true) {
        Matrix S(n, n);
        for (size_t r = 0; r < n; r++)
            for (size_t c = 0; c < n; c++) S(r, c) = Scalar(e(rng));
        if (!S.det().is_zero()) return S;
    }
}
// residue with prescribed integer eigenvalues (possibly with Jordan blocks),
// conjugated into general position
EStructure rspectral(size_t n, size_t order, bool allow_jordan) {
    std::uniform_int_distribution<int> ev(-5, 5), coin(0, 1);
    std::vector<int> evs;
    while (evs.size() < n) {
        int w = ev(rng);
        size_t mult = 1 + (coin(rng) && evs.size() + 2 <= n ? 1 : 0);
        for (size_t k = 0; k < mult && evs.size() < n; k++) evs.push_back(w);
    }
    std::sort(evs.begin(), evs.end());
    Matrix D(n, n);
    for (size_t k = 0; k < n; k++) {
        D(k, k) = Scalar(evs[k]);
        if (allow_jordan && k + 1 < n && evs[k] == evs[k + 1] && coin(rng))
            D(k, k + 1) = Scalar(1);
    }
    Matrix S = runimod(n);
    EStructure E = EStructure::zero(n, order);
    E.A[0] = S * D * S.inverse();
    for (size_t i = 1; i <= order; i++) E.A[i] = rmat(n);
    return E;
}

Matrix offpart(const Matrix& M, const std::vector<EigenBlock>& blocks) {
    Matrix out = M;
    for (const auto& b : blocks)
        for (size_t r = b.begin; r < b.begin + b.mult; r++)
            for (size_t c = b.begin; c < b.begin + b.mult; c++) out(r, c) = Scalar(0);
    return out;
}
}  // namespace

TEST_CASE("eigenblocks of the s2 and quadric residues") {
    QuantumEStructure s2 = build_quantum(preset("s2"), 4);
    EigenBlockData eb = generalized_eigenblocks(s2.E.residue(), Field::Q);
    REQUIRE(eb.blocks.size() == 2);
    CHECK(eb.blocks[0].w == Scalar(-2));
    CHECK(eb.blocks[1].w == Scalar(2));
    CHECK(eb.blocks[0].mult == 1);
    CHECK(eb.blocks[1].mult == 1);
    // columns really are eigenvectors
    for (const auto& b : eb.blocks)
        for (size_t r = 0; r < 2; r++)
            CHECK((s2.E.residue() * eb.C)(r, b.begin) ==
                  b.w * eb.C(r, b.begin));

    QuantumEStructure quad = build_quantum(preset("quadric-intersection-cp5"), 4);
    EigenBlockData qb = generalized_eigenblocks(quad.E.residue(), Field::Q);
    REQUIRE(qb.blocks.size() == 3);
    CHECK(qb.blocks[0].w == Scalar(-8));
    CHECK(qb.blocks[0].mult == 1);
    CHECK(qb.blocks[1].w == Scalar(0));
    CHECK(qb.blocks[1].mult == 2);
    CHECK(qb.blocks[2].w == Scalar(8));
    CHECK(qb.blocks[2].mult == 1);
}

TEST_CASE("irrational and complex spectra are rejected / routed by field") {
    Matrix m = {{Scalar(0), Scalar(2)}, {Scalar(1), Scalar(0)}};  // w^2 = 2
    CHECK_THROWS_AS(generalized_eigenblocks(m, Field::Q), IrrationalSpectrum);
    Matrix rot = {{Scalar(0), Scalar(-1)}, {Scalar(1), Scalar(0)}};  // w = +-i
    CHECK_THROWS_AS(generalized_eigenblocks(rot, Field::Q), IrrationalSpectrum);
    EigenBlockData eb = generalized_eigenblocks(rot, Field::QI);
    REQUIRE(eb.blocks.size() == 2);
    CHECK(eb.blocks[0].w * eb.blocks[0].w == Scalar(-1));
}

TEST_CASE("sylvester solve on off-diagonal blocks") {
    std::vector<EigenBlock> blocks = {{Scalar(-2), 1, 0}, {Scalar(2), 1, 1}};
    Matrix A0 = Matrix::diagonal({Scalar(-2), Scalar(2)});
    CHECK(sylvester_offdiag_solve(A0, Matrix(2, 2), blocks).is_zero());
    Matrix C = {{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}};
    Matrix T = sylvester_offdiag_solve(A0, C, blocks);
    CHECK(T(0, 1) == Scalar(-1, 4));
    CHECK(T(1, 0) == Scalar(1, 4));
    CHECK(A0 * T - T * A0 == C);

    // random block-grouped residues: multiply back
    for (int t = 0; t < 10; t++) {
        std::vector<EigenBlock> bl = {{Scalar(-3), 2, 0}, {Scalar(1), 2, 2}};
        Matrix A(4, 4);
        std::uniform_int_distribution<int> e(-2, 2);
        for (const auto& b : bl)
            for (size_t r = 0; r < b.mult; r++)
                for (size_t c = 0; c < b.mult; c++)
                    A(b.begin + r, b.begin + c) =
                        b.w + (r == c ? Scalar(0) : Scalar(e(rng)));
        Matrix Cm = offpart(rmat(4), bl);
        Matrix Tm = sylvester_offdiag_solve(A, Cm, bl);
        CHECK(A * Tm - Tm * A == Cm);
        CHECK(offpart(Tm, bl) == Tm);  // zero diagonal blocks
    }
}

TEST_CASE("block decomposition of a diagonal structure is trivial") {
    EStructure E = EStructure::zero(3, 4);
    E.A[0] = Matrix::diagonal({Scalar(-1), Scalar(0), Scalar(2)});
    for (size_t i = 1; i <= 4; i++)
        E.A[i] = Matrix::diagonal({rs(), rs(), rs()});
    BlockDecomposition bd = block_diagonalize(E, 4);
    CHECK(bd.P == matrix_series_identity(3, 4));
    CHECK(bd.transformed.A == E.A);
    REQUIRE(bd.sub.size() == 3);
    for (size_t b = 0; b < 3; b++) CHECK(bd.sub[b].rank == 1);
}

TEST_CASE("block decomposition invariants on random structures") {
    const size_t N = 8;
    int done = 0;
    while (done < 20) {
        std::uniform_int_distribution<int> rk(2, 5);
        size_t n = rk(rng);
        EStructure E = rspectral(n, N, /*allow_jordan=*/true);
        E.field = Field::Q;
        BlockDecomposition bd = block_diagonalize(E, N);
        const auto& blocks = bd.eigen.blocks;

        // transformed connection is block-diagonal at every order
        for (const auto& Ai : bd.transformed.A) CHECK(offpart(Ai, blocks).is_zero());
        // and is the P-gauge of the input
        EStructure chk = gauge_transform(bd.P, E);
        CHECK(chk.A == bd.transformed.A);
        // residue blocks agree with the eigenframe conjugate
        Matrix R0 = bd.eigen.C.inverse() * E.residue() * bd.eigen.C;
        CHECK(bd.transformed.A[0] == R0);
        // order-1 diagonal blocks survive untouched from the eigenframe gauge
        MatrixSeries Cs(std::vector<Matrix>(N + 1, Matrix(n, n)));
        Cs[0] = bd.eigen.C;
        EStructure frame = gauge_transform(Cs, E);
        CHECK(bd.transformed.A[1] - offpart(bd.transformed.A[1], blocks) ==
              frame.A[1] - offpart(frame.A[1], blocks));
        // sub-structures are the diagonal blocks
        for (size_t b = 0; b < blocks.size(); b++) {
            CHECK(bd.sub[b].rank == blocks[b].mult);
            CHECK(bd.sub[b].A[0](0, 0) ==
                  bd.transformed.A[0](blocks[b].begin, blocks[b].begin));
        }
        done++;
    }
}

TEST_CASE("two admissible decompositions differ by a block-diagonal gauge") {
    const size_t N = 6;
    for (int t = 0; t < 5; t++) {
        size_t n = 4;
        EStructure E = rspectral(n, N, /*allow_jordan=*/false);
        E.field = Field::Q;
        BlockDecomposition bd = block_diagonalize(E, N);

        // decompose through a random pre-gauge; the composite is a second
        // admissible block-diagonalizing gauge for E
        MatrixSeries G = matrix_series_identity(n, N);
        G[0] = runimod(n);
        for (size_t k = 1; k <= N; k++) G[k] = rmat(n);
        BlockDecomposition bd2 = block_diagonalize(gauge_transform(G, E), N);
        MatrixSeries P2 = (G * bd2.P).truncated(N);

        MatrixSeries W = bd.P.inverse() * P2;
        for (size_t k = 0; k <= N; k++)
            CHECK(offpart(W[k], bd.eigen.blocks).is_zero());
    }
}

TEST_CASE("hom between disjoint exponentials vanishes") {
    EStructure E1 = EStructure::exponential(Scalar(-2), 8);
    EStructure E2 = EStructure::exponential(Scalar(2), 8);
    CHECK(hom_solver(E1, E2, 8).empty());
    CHECK(hom_solver(E2, E1, 8).empty());
}

TEST_CASE("endomorphisms of an exponential are the constants") {
    EStructure E = EStructure::exponential(Scalar(5, 3), 8);
    auto basis = hom_solver(E, E, 8);
    REQUIRE(basis.size() == 1);
    CHECK_FALSE(basis[0][0](0, 0).is_zero());
    for (size_t k = 1; k <= 8; k++) CHECK(basis[0][k](0, 0) == Scalar(0));
}

TEST_CASE("gauge images appear in the hom space") {
    for (int t = 0; t < 3; t++) {
        // generate well past the solve order so the solver's internal
        // lookahead rows see genuine coefficients of the gauge image
        size_t n = 2, N = 5, Ngen = N + 8;
        EStructure E1 = rspectral(n, Ngen, false);
        MatrixSeries P = matrix_series_identity(n, Ngen);
        P[0] = runimod(n);
        for (size_t k = 1; k <= Ngen; k++) P[k] = rmat(n);
        EStructure E2 = gauge_transform(P, E1);
        auto basis = hom_solver(E1, E2, N);
        REQUIRE(!basis.empty());
        // P^{-1} (sections map of the gauge) lies in the span of the basis
        MatrixSeries F = P.inverse();
        size_t dim = (N + 1) * n * n;
        Matrix stack(basis.size() + 1, dim);
        auto flatten = [&](const MatrixSeries& S, size_t row) {
            for (size_t k = 0; k <= N; k++)
                for (size_t r = 0; r < n; r++)
                    for (size_t c = 0; c < n; c++)
                        stack(row, k * n * n + r * n + c) = S[k](r, c);
        };
        for (size_t b = 0; b < basis.size(); b++) flatten(basis[b], b);
        flatten(F, basis.size());
        Matrix top(basis.size(), dim);
        for (size_t b = 0; b < basis.size(); b++)
            for (size_t k = 0; k < dim; k++) top(b, k) = stack(b, k);
        CHECK(stack.rank() == top.rank());
    }
}
