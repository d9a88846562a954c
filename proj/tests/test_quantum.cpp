#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "teplab/quantum.hpp"

using namespace teplab;

namespace {
// closed form for the s2 flat-section head coefficient:
// alpha_n = 4^{-2n}/n! * prod_{j=0}^{n-1} (4 j^2 - 1)
Scalar alpha_closed(size_t n) {
    Scalar p(1);
    for (size_t j = 0; j < n; j++)
        p *= Scalar(4 * static_cast<long>(j) * static_cast<long>(j) - 1);
    Scalar pow16(1);
    for (size_t j = 0; j < n; j++) pow16 *= Scalar(1, 16);
    Scalar fact(1);
    for (size_t j = 1; j <= n; j++) fact *= Scalar(static_cast<long>(j));
    return pow16 * p / fact;
}

Matrix refP() {
    return Matrix{
        {Scalar(1), Scalar(0), Scalar(1), Scalar(1)},
        {Scalar(-3, 4), Scalar(2, 3), Scalar(0), Scalar(3, 4)},
        {Scalar(1, 4), Scalar(0), Scalar(-1, 12), Scalar(1, 4)},
        {Scalar(-1, 16), Scalar(-1, 6), Scalar(0), Scalar(1, 16)}};
}
Matrix refJ() {
    Matrix J(4, 4);
    J(0, 0) = Scalar(-8);
    J(1, 2) = Scalar(1);
    J(3, 3) = Scalar(8);
    return J;
}
Matrix refM() {
    return Matrix{{Scalar(0), Scalar(2, 3), Scalar(-1, 4), Scalar(0)},
                  {Scalar(9, 16), Scalar(1), Scalar(0), Scalar(-9, 16)},
                  {Scalar(-3, 2), Scalar(0), Scalar(-1), Scalar(-3, 2)},
                  {Scalar(0), Scalar(-2, 3), Scalar(-1, 4), Scalar(0)}};
}
}  // namespace

TEST_CASE("preset data") {
    QuantumData s2 = preset("s2");
    CHECK(s2.rank == 2);
    CHECK(s2.dim == 1);
    CHECK(s2.c1(0, 1) == Scalar(2));
    CHECK(s2.mu() == Matrix::diagonal({Scalar(-1, 2), Scalar(1, 2)}));

    QuantumData q = preset("quadric-intersection-cp5");
    CHECK(q.rank == 4);
    CHECK(q.dim == 3);
    CHECK(q.mu() == Matrix::diagonal({Scalar(-3, 2), Scalar(-1, 2), Scalar(1, 2),
                                      Scalar(3, 2)}));
    CHECK(q.pairing(0, 3) == Scalar(4));

    CHECK_THROWS_AS(preset("cp7"), UnknownPreset);
}

TEST_CASE("build_quantum shape and validation") {
    QuantumEStructure q = build_quantum(preset("s2"), 6);
    CHECK(q.E.rank == 2);
    CHECK(q.E.order() == 6);
    CHECK(q.E.A[0] == q.data.c1);
    CHECK(q.E.A[1] == q.data.mu());
    for (size_t i = 2; i <= 6; i++) CHECK(q.E.A[i].is_zero());
    REQUIRE(q.E.pol);
    CHECK(q.E.pol->G == q.data.pairing);
    REQUIRE(q.E.grading);
    CHECK(q.E.grading->mu == q.data.mu());

    // a non-Frobenius c1 is rejected
    QuantumData bad = preset("s2");
    bad.c1(0, 0) = Scalar(1);
    CHECK_THROWS_AS(build_quantum(bad, 4), Inconsistent);
    bad = preset("s2");
    bad.pairing = Matrix(2, 2);
    CHECK_THROWS_AS(build_quantum(bad, 4), Inconsistent);
}

TEST_CASE("polarization is covariantly constant for both presets") {
    for (const char* name : {"s2", "quadric-intersection-cp5"}) {
        QuantumEStructure q = build_quantum(preset(name), 8);
        CHECK(check_polarization(q.E).pass);
    }
}

TEST_CASE("s2 flat sections: values, recursions, closed form") {
    QuantumEStructure q = build_quantum(preset("s2"), 12);
    const size_t N = 11;

    // eigenvalue +2, seed 1 + H
    FlatFrameEntry f = flat_sections_ode(q, Scalar(2), {Scalar(1), Scalar(1)}, N);
    std::vector<Scalar> alpha(N + 1), beta(N + 1);
    for (size_t m = 0; m <= N; m++) {
        Scalar c0 = f.v[m](0, 0), c1 = f.v[m](1, 0);
        alpha[m] = (c0 + c1) / Scalar(2);
        beta[m] = (c1 - c0) / Scalar(2);
    }
    CHECK(alpha[0] == Scalar(1));
    CHECK(beta[0] == Scalar(0));
    CHECK(alpha[1] == Scalar(-1, 16));
    CHECK(beta[1] == Scalar(1, 8));
    for (long n = 0; n <= 10; n++) {
        // alpha_{n+1} = alpha_n (4n^2-1)/(16(n+1)),  beta_n = -2n alpha_n
        CHECK(alpha[static_cast<size_t>(n) + 1] ==
              alpha[static_cast<size_t>(n)] * Scalar(4 * n * n - 1, 16 * (n + 1)));
        CHECK(beta[static_cast<size_t>(n)] ==
              Scalar(-2 * n) * alpha[static_cast<size_t>(n)]);
        CHECK(alpha[static_cast<size_t>(n)] == alpha_closed(static_cast<size_t>(n)));
    }

    // eigenvalue -2, seed H - 1
    FlatFrameEntry g = flat_sections_ode(q, Scalar(-2), {Scalar(-1), Scalar(1)}, N);
    std::vector<Scalar> delta(N + 1), gamma(N + 1);
    for (size_t m = 0; m <= N; m++) {
        Scalar c0 = g.v[m](0, 0), c1 = g.v[m](1, 0);
        delta[m] = (c1 - c0) / Scalar(2);
        gamma[m] = (c0 + c1) / Scalar(2);
    }
    CHECK(delta[1] == Scalar(1, 16));
    CHECK(gamma[1] == Scalar(-1, 8));
    for (long n = 0; n <= 10; n++)
        CHECK(gamma[static_cast<size_t>(n)] ==
              Scalar(-2 * n) * delta[static_cast<size_t>(n)]);

    // both really solve u^2 nabla v = w v through the computed order
    for (const auto& e : {f, g}) {
        VectorSeries lhs = apply_connection(q.E, e.v);
        for (size_t m = 0; m <= N; m++) CHECK(lhs[m] == e.w * e.v[m]);
    }

    CHECK_THROWS_AS(flat_sections_ode(q, Scalar(3), {Scalar(1), Scalar(1)}, 3),
                    Inconsistent);
    CHECK_THROWS_AS(flat_sections_ode(q, Scalar(2), {Scalar(1), Scalar(0)}, 3),
                    Inconsistent);
}

TEST_CASE("s2 Teleman R-matrix: first order, flatness, closed form") {
    QuantumEStructure q = build_quantum(preset("s2"), 8);
    TelemanResult t = teleman_rmatrix(q, 7);
    CHECK(t.eigen.blocks[0].w == Scalar(-2));
    CHECK(t.eigen.blocks[1].w == Scalar(2));
    CHECK(t.mu_eigen(0, 0) == Scalar(0));
    CHECK(t.mu_eigen(1, 1) == Scalar(0));

    // R columns conjugated back to the working frame are flat sections
    for (size_t j = 0; j < 2; j++) {
        std::vector<Matrix> col;
        for (size_t k = 0; k <= 7; k++) {
            Matrix ck = t.eigen.C * t.R[k];
            Matrix v(2, 1);
            for (size_t r = 0; r < 2; r++) v(r, 0) = ck(r, j);
            col.push_back(std::move(v));
        }
        VectorSeries vs(col);
        VectorSeries lhs = apply_connection(q.E, vs);
        for (size_t m = 0; m <= 7; m++)
            CHECK(lhs[m] == t.eigen.blocks[j].w * vs[m]);
    }

    // eigenvalue ordering (-2, 2): closed form, transposed
    //   R_n = 4^{-2n}/n! prod_{j<n}(4j^2-1) [[(-1)^n, (-1)^{n-1} 2n], [-2n, 1]]^T
    CHECK(t.R[1](0, 0) == Scalar(1, 16));
    CHECK(t.R[1](0, 1) == Scalar(1, 8));
    CHECK(t.R[1](1, 0) == Scalar(-1, 8));
    CHECK(t.R[1](1, 1) == Scalar(-1, 16));
    for (long n = 0; n <= 7; n++) {
        Scalar c(1);
        for (long j = 0; j < n; j++) c *= Scalar(4 * j * j - 1);
        Scalar fact(1);
        for (long j = 1; j <= n; j++) fact *= Scalar(j);
        Scalar pw(1);
        for (long j = 0; j < n; j++) pw *= Scalar(1, 16);
        Scalar pre = pw * c / fact;
        Matrix closed(2, 2);
        closed(0, 0) = pre * (n % 2 == 0 ? Scalar(1) : Scalar(-1));
        closed(0, 1) = pre * Scalar(2 * n) * (n % 2 == 1 ? Scalar(1) : Scalar(-1));
        closed(1, 0) = pre * Scalar(-2 * n);
        closed(1, 1) = pre;
        CHECK(t.R[static_cast<size_t>(n)] == closed.transpose());
    }
}

TEST_CASE("quadric residue is not semisimple: Teleman recursion refuses it") {
    // the quadric residue has a nilpotent Jordan block at eigenvalue 0 (its
    // reference normal form J has J(1,2) = 1), so the semisimple recursion
    // must refuse rather than produce a wrong answer.
    QuantumEStructure q = build_quantum(preset("quadric-intersection-cp5"), 8);
    CHECK_THROWS_AS(teleman_rmatrix(q, 6), NotSemisimple);
}

TEST_CASE("reference frame conjugates the quadric data to (J, M)") {
    QuantumData q = preset("quadric-intersection-cp5");
    Matrix P = refP();
    Matrix Pi = P.inverse();
    CHECK(Pi * q.c1 * P == refJ());
    CHECK(Pi * q.mu() * P == refM());
}

TEST_CASE("the two R-matrix conventions are mutually inverse") {
    QuantumEStructure q = build_quantum(preset("s2"), 8);
    TelemanResult t = teleman_rmatrix(q, 6);
    Matrix xi = t.eigen.C.inverse() * q.E.residue() * t.eigen.C;
    MatrixSeries Rg = rmatrix_from_grading(xi, t.mu_eigen, 6, q.E.field);
    CHECK((t.R * Rg).truncated(6) == matrix_series_identity(2, 6));
    CHECK((Rg * t.R).truncated(6) == matrix_series_identity(2, 6));
}

TEST_CASE("the GW splitting is homogeneous and pairing-compatible but not block-preserving") {
    QuantumEStructure q = build_quantum(preset("s2"), 6);
    SplittingKind k = check_splitting_kind(gw_splitting(q), q.E,
                                           {Scalar(1), Scalar(0)});
    CHECK(k.homogeneous);
    CHECK(k.p_compatible);
    CHECK(k.omega_compatible);
    CHECK_FALSE(k.block_preserving);
}
