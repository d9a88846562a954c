// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "teplab/identities.hpp"
#include "teplab/io.hpp"
#include "teplab/quantum.hpp"

using namespace teplab;

namespace {

int g_failures = 0;

using Clock = std::chrono::steady_clock;

void run(int num, const std::string& desc, double budget_s,
         const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto t0 = Clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("time budget ") +
                  std::to_string(budget_s) + "s exceeded";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", secs);
    std::cout << (ok ? "PASS" : "FAIL") << " criterion-" << num << " " << desc
              << " [" << buf << "]";
    if (!ok && !detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) g_failures++;
}

Scalar alpha_closed(long n) {
    Scalar p(1);
    for (long j = 0; j < n; j++) p *= Scalar(4 * j * j - 1);
    Scalar pw(1);
    for (long j = 0; j < n; j++) pw *= Scalar(1, 16);
    Scalar fact(1);
    for (long j = 1; j <= n; j++) fact *= Scalar(j);
    return pw * p / fact;
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
Matrix refN() {
    return Matrix::diagonal({Scalar(0), Scalar(1, 2), Scalar(-1, 2), Scalar(0)});
}
Matrix refM() {
    return Matrix{{Scalar(0), Scalar(2, 3), Scalar(-1, 4), Scalar(0)},
                  {Scalar(9, 16), Scalar(1), Scalar(0), Scalar(-9, 16)},
                  {Scalar(-3, 2), Scalar(0), Scalar(-1), Scalar(-3, 2)},
                  {Scalar(0), Scalar(-2, 3), Scalar(-1, 4), Scalar(0)}};
}
EStructure refstruct(const Matrix& A1, size_t order) {
    EStructure E = EStructure::zero(4, order);
    E.field = Field::Q;
    E.A[0] = refJ();
    E.A[1] = A1;
    return E;
}

std::mt19937 g_rng(90210);
Scalar rsc() {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    return Scalar(num(g_rng), den(g_rng));
}
Matrix rmat(size_t n) {
    Matrix m(n, n);
    for (size_t r = 0; r < n; r++)
        for (size_t c = 0; c < n; c++) m(r, c) = rsc();
    return m;
}
Matrix rinvertible(size_t n) {
    std::uniform_int_distribution<int> e(-2, 2);
    while (true) {
        Matrix S(n, n);
        for (size_t r = 0; r < n; r++)
            for (size_t c = 0; c < n; c++) S(r, c) = Scalar(e(g_rng));
        if (!S.det().is_zero()) return S;
    }
}
EStructure rspectral(size_t n, size_t order, const std::vector<int>& evs) {
    Matrix D(n, n);
    for (size_t k = 0; k < n; k++) D(k, k) = Scalar(evs[k]);
    Matrix S = rinvertible(n);
    EStructure E = EStructure::zero(n, order);
    E.field = Field::Q;
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

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string of = "/tmp/teplab_accept_out_" + std::to_string(counter++);
    std::string cmd = std::string(TEPLAB_CLI_PATH) + " " + args + " > " + of + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(of);
    std::remove(of.c_str());
    return r;
}

}  // namespace

int main() {
    // 1: s2 flat-section coefficients, first orders and recursions, n <= 10.
    run(1, "s2 flat sections: seed values and recursions to n=10", 1.0,
        [](std::string& detail) {
            QuantumEStructure q = build_quantum(preset("s2"), 12);
            const size_t N = 11;
            FlatFrameEntry f =
                flat_sections_ode(q, Scalar(2), {Scalar(1), Scalar(1)}, N);
            FlatFrameEntry g =
                flat_sections_ode(q, Scalar(-2), {Scalar(-1), Scalar(1)}, N);
            std::vector<Scalar> al(N + 1), be(N + 1), de(N + 1), ga(N + 1);
            for (size_t m = 0; m <= N; m++) {
                al[m] = (f.v[m](0, 0) + f.v[m](1, 0)) / Scalar(2);
                be[m] = (f.v[m](1, 0) - f.v[m](0, 0)) / Scalar(2);
                de[m] = (g.v[m](1, 0) - g.v[m](0, 0)) / Scalar(2);
                ga[m] = (g.v[m](0, 0) + g.v[m](1, 0)) / Scalar(2);
            }
            bool ok = al[1] == Scalar(-1, 16) && be[1] == Scalar(1, 8) &&
                      de[1] == Scalar(1, 16) && ga[1] == Scalar(-1, 8);
            for (long n = 0; n <= 10; n++) {
                size_t sn = static_cast<size_t>(n);
                ok = ok && al[sn + 1] == al[sn] * Scalar(4 * n * n - 1, 16 * (n + 1));
                ok = ok && be[sn] == Scalar(-2 * n) * al[sn];
                ok = ok && ga[sn] == Scalar(-2 * n) * de[sn];
            }
            // both sections solve u^2 nabla v = w v
            for (const auto& e : {f, g}) {
                VectorSeries lhs = apply_connection(q.E, e.v);
                for (size_t m = 0; m <= N; m++)
                    if (lhs[m] != e.w * e.v[m]) ok = false;
            }
            if (!ok) detail = "flat-section oracle mismatch";
            return ok;
        });

    // 2: closed form for the head coefficient.
    run(2, "s2 flat sections: closed form alpha_n to n=10", 0,
        [](std::string& detail) {
            QuantumEStructure q = build_quantum(preset("s2"), 12);
            FlatFrameEntry f =
                flat_sections_ode(q, Scalar(2), {Scalar(1), Scalar(1)}, 10);
            for (long n = 0; n <= 10; n++) {
                Scalar al = (f.v[static_cast<size_t>(n)](0, 0) +
                             f.v[static_cast<size_t>(n)](1, 0)) /
                            Scalar(2);
                if (al != alpha_closed(n)) {
                    detail = "closed form fails at n=" + std::to_string(n);
                    return false;
                }
            }
            return true;
        });

    // 3: Teleman R-matrix to order 6: flat columns, closed form transposed.
    run(3, "s2 Teleman R-matrix: flat columns and closed form to order 6", 1.0,
        [](std::string& detail) {
            QuantumEStructure q = build_quantum(preset("s2"), 8);
            TelemanResult t = teleman_rmatrix(q, 6);
            bool ok = true;
            for (size_t j = 0; j < 2; j++) {
                std::vector<Matrix> col;
                for (size_t k = 0; k <= 6; k++) {
                    Matrix ck = t.eigen.C * t.R[k];
                    Matrix v(2, 1);
                    for (size_t r = 0; r < 2; r++) v(r, 0) = ck(r, j);
                    col.push_back(std::move(v));
                }
                VectorSeries vs(col);
                VectorSeries lhs = apply_connection(q.E, vs);
                for (size_t m = 0; m <= 6; m++)
                    if (lhs[m] != t.eigen.blocks[j].w * vs[m]) ok = false;
            }
            for (long n = 0; n <= 6 && ok; n++) {
                Scalar pre = alpha_closed(n);
                Matrix closed(2, 2);
                closed(0, 0) = pre * (n % 2 == 0 ? Scalar(1) : Scalar(-1));
                closed(0, 1) =
                    pre * Scalar(2 * n) * (n % 2 == 1 ? Scalar(1) : Scalar(-1));
                closed(1, 0) = pre * Scalar(-2 * n);
                closed(1, 1) = pre;
                if (t.R[static_cast<size_t>(n)] != closed.transpose()) {
                    detail = "closed form fails at order " + std::to_string(n);
                    ok = false;
                }
            }
            return ok;
        });

    // 4: rank-4 reference pair: unique solution, entries, consistency relations.
    run(4, "rank-4 reference pair: unique R, order-1 entries, relations to i=8", 5.0,
        [](std::string& detail) {
            EStructure E1 = refstruct(refN(), 8);
            EStructure E2 = refstruct(refM(), 8);
            IsomorphismSolution sol = isomorphism_solve_full(E1, E2, 8, 2);
            if (sol.kernel_dim != 0) {
                detail = "kernel dimension " + std::to_string(sol.kernel_dim);
                return false;
            }
            bool ok = sol.R[1](0, 1) == Scalar(-1, 12) &&
                      sol.R[1](2, 1) == Scalar(1, 2) &&
                      sol.R[1](1, 0) == Scalar(3, 32);
            if (!ok) detail = "order-1 entries differ";
            for (long i = 0; i <= 8 && ok; i++) {
                const Matrix& Ri = sol.R[static_cast<size_t>(i)];
                Scalar I(i);
                bool c1 = -I * Ri(0, 0) + Scalar(9, 16) * Ri(0, 1) -
                              Scalar(3, 2) * Ri(0, 2) ==
                          Scalar(0);
                bool c2 = -I * Ri(3, 3) - Scalar(9, 16) * Ri(3, 1) -
                              Scalar(3, 2) * Ri(3, 2) ==
                          Scalar(0);
                bool c3 = (Scalar(3, 2) - I) * Ri(2, 1) + Scalar(2, 3) * Ri(2, 0) -
                              Scalar(2, 3) * Ri(2, 3) ==
                          Scalar(0);
                bool c4 = -(I + Scalar(1, 2)) * Ri(2, 2) - Scalar(1, 4) * Ri(2, 0) -
                              Scalar(1, 4) * Ri(2, 3) ==
                          (I - Scalar(1, 2)) * Ri(1, 1) - Scalar(2, 3) * Ri(1, 0) +
                              Scalar(2, 3) * Ri(1, 3);
                if (!(c1 && c2 && c3 && c4)) {
                    detail = "consistency relation fails at i=" + std::to_string(i);
                    ok = false;
                }
            }
            return ok;
        });

    // 5: the reference frame conjugates the quadric data to (J, M).
    run(5, "quadric frame: P^{-1} c1 P = J and P^{-1} mu P = M", 0,
        [](std::string& detail) {
            QuantumData q = preset("quadric-intersection-cp5");
            Matrix P = refP(), Pi = refP().inverse();
            bool ok = Pi * q.c1 * P == refJ() && Pi * q.mu() * P == refM();
            if (!ok) detail = "frame conjugation mismatch";
            return ok;
        });

    // 6: Levelt decomposition invariants on 20 random structures.
    run(6, "block decomposition invariants on 20 random structures (rank <= 5, order 8)",
        0, [](std::string& detail) {
            const size_t N = 8;
            std::uniform_int_distribution<int> rk(2, 5), ev(-5, 5), coin(0, 1);
            for (int t = 0; t < 20; t++) {
                size_t n = rk(g_rng);
                std::vector<int> evs;
                while (evs.size() < n) {
                    int w = ev(g_rng);
                    size_t mult = 1 + (coin(g_rng) && evs.size() + 2 <= n ? 1 : 0);
                    for (size_t k = 0; k < mult && evs.size() < n; k++)
                        evs.push_back(w);
                }
                EStructure E = rspectral(n, N, evs);
                BlockDecomposition bd = block_diagonalize(E, N);
                for (const auto& Ai : bd.transformed.A)
                    if (!offpart(Ai, bd.eigen.blocks).is_zero()) {
                        detail = "off-diagonal residue survives";
                        return false;
                    }
                EStructure chk = gauge_transform(bd.P, E);
                if (chk.A != bd.transformed.A) {
                    detail = "gauge certificate mismatch";
                    return false;
                }
                Matrix R0 = bd.eigen.C.inverse() * E.residue() * bd.eigen.C;
                if (bd.transformed.A[0] != R0) {
                    detail = "residue block mismatch";
                    return false;
                }
                // a second admissible gauge differs by a block-diagonal factor
                MatrixSeries G = matrix_series_identity(n, N);
                G[0] = rinvertible(n);
                for (size_t k = 1; k <= N; k++) G[k] = rmat(n);
                BlockDecomposition bd2 = block_diagonalize(gauge_transform(G, E), N);
                MatrixSeries P2 = (G * bd2.P).truncated(N);
                MatrixSeries W = bd.P.inverse() * P2;
                for (size_t k = 0; k <= N; k++)
                    if (!offpart(W[k], bd.eigen.blocks).is_zero()) {
                        detail = "uniqueness up to block-diagonal factor fails";
                        return false;
                    }
            }
            return true;
        });

    // 7: hom spaces vanish for 20 pairs with disjoint residue spectra.
    run(7, "hom space vanishes for 20 disjoint-spectrum pairs (order 8)", 0,
        [](std::string& detail) {
            std::uniform_int_distribution<int> rk(1, 3);
            for (int t = 0; t < 20; t++) {
                size_t n1 = rk(g_rng), n2 = rk(g_rng);
                // disjoint integer spectra: evens on one side, odds on the other
                std::vector<int> e1, e2;
                for (size_t k = 0; k < n1; k++) e1.push_back(2 * (int(k) - 1));
                for (size_t k = 0; k < n2; k++) e2.push_back(2 * int(k) + 1);
                EStructure E1 = rspectral(n1, 8, e1);
                EStructure E2 = rspectral(n2, 8, e2);
                auto basis = hom_solver(E1, E2, 8);
                if (!basis.empty()) {
                    detail = "nonzero hom space at trial " + std::to_string(t);
                    return false;
                }
            }
            return true;
        });

    // 8: the two R-matrix conventions multiply to the identity.  Only s2 is
    // admissible here: the quadric residue has a Jordan block at 0, so both
    // semisimple recursions refuse it (checked as part of the criterion).
    run(8, "R-matrix convention duality: product is Id to order 6", 0,
        [](std::string& detail) {
            QuantumEStructure q = build_quantum(preset("s2"), 8);
            TelemanResult t = teleman_rmatrix(q, 6);
            Matrix xi = t.eigen.C.inverse() * q.E.residue() * t.eigen.C;
            MatrixSeries Rg = rmatrix_from_grading(xi, t.mu_eigen, 6, q.E.field);
            if ((t.R * Rg).truncated(6) != matrix_series_identity(q.E.rank, 6) ||
                (Rg * t.R).truncated(6) != matrix_series_identity(q.E.rank, 6)) {
                detail = "product differs from Id";
                return false;
            }
            QuantumEStructure quad =
                build_quantum(preset("quadric-intersection-cp5"), 8);
            try {
                teleman_rmatrix(quad, 6);
                detail = "non-semisimple residue not refused";
                return false;
            } catch (const NotSemisimple&) {
            }
            return true;
        });

    // 9: randomized chain-level identity suite, 100 trials per sample algebra.
    run(9, "chain-level identity suite: 100 trials per sample algebra (maxlen 4)", 60.0,
        [](std::string& detail) {
            SuiteOptions opt;
            opt.trials = 100;
            opt.maxlen = 4;
            opt.chain_terms = 2;
            opt.full_pq_grid = false;
            opt.arity_cap = 5;
            IdentityReport rep;
            for (const auto& [name, A] : samples::zoo())
                identity_suite(A, name, opt, rep);
            // graded identities on the Euler deformations
            SuiteOptions gopt = opt;
            gopt.trials = 100;
            gopt.maxlen = 3;
            for (auto& [name, A] :
                 std::vector<std::pair<std::string, AInfty>>{
                     {"exterior^e", e_deformation(samples::exterior())},
                     {"clifford^s", s_deformation(samples::clifford())}})
                identity_suite(A, name, gopt, rep);
            if (!rep.pass()) {
                for (const auto& [n, t] : rep.items)
                    if (t.failures)
                        detail += n + "(" + t.first_witness + ") ";
                return false;
            }
            return rep.total_checks() > 0;
        });

    // 10: covariant constancy of the pairing to order 8, with a negative control.
    run(10, "polarization check: presets and exponential pass, perturbation caught", 0,
        [](std::string& detail) {
            for (const char* name : {"s2", "quadric-intersection-cp5"}) {
                QuantumEStructure q = build_quantum(preset(name), 8);
                if (!check_polarization(q.E).pass) {
                    detail = std::string("preset fails: ") + name;
                    return false;
                }
            }
            EStructure ex = EStructure::exponential(Scalar(-2), 8);
            if (!check_polarization(ex).pass) {
                detail = "exponential structure fails";
                return false;
            }
            EStructure bad = build_quantum(preset("s2"), 8).E;
            bad.A[1](0, 0) += Scalar(1);
            PolarizationReport r = check_polarization(bad);
            if (r.pass || r.first_failing_order != 1) {
                detail = "perturbed control not caught at order 1";
                return false;
            }
            return true;
        });

    // 11: CLI determinism and byte-exact round trips on shipped fixtures.
    run(11, "CLI determinism and byte-exact round trips on shipped fixtures", 0,
        [](std::string& detail) {
            RunResult a = run_cli("preset s2 --order 8");
            RunResult b = run_cli("preset s2 --order 8");
            if (a.status != 0 || a.out != b.out) {
                detail = "preset output not deterministic";
                return false;
            }
            std::string fdir = TEPLAB_FIXTURE_DIR;
            for (const char* name :
                 {"s2.json", "quadric-intersection-cp5.json", "bad-polarization.json",
                  "iso-from.json", "iso-to.json", "nonunique.json", "mismatch-a.json",
                  "mismatch-b.json", "irrational.json"}) {
                std::string text = slurp(fdir + "/" + name);
                if (serialize_connection(parse_connection(text, name)) != text) {
                    detail = std::string("connection round trip fails: ") + name;
                    return false;
                }
            }
            for (const char* name : {"matrix2.json", "exterior-t.json"}) {
                std::string text = slurp(fdir + "/" + name);
                if (serialize_ainfty(parse_ainfty(text, name)) != text) {
                    detail = std::string("algebra round trip fails: ") + name;
                    return false;
                }
            }
            RunResult d1 = run_cli("decompose " + fdir + "/s2.json --order 8");
            RunResult d2 = run_cli("decompose " + fdir + "/s2.json --order 8");
            if (d1.status != 0 || d1.out != d2.out) {
                detail = "decompose output not deterministic";
                return false;
            }
            return true;
        });

    return g_failures == 0 ? 0 : 1;
}
