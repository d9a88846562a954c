#pragma once

#include <random>
#include <string>
#include <vector>

#include "samples.hpp"

namespace teplab {

// ---------------------------------------------------------------------------
// Randomized chain-level identity suite.  Every check is exact; a failure
// records the first witness.  Deterministic for a fixed seed.
// ---------------------------------------------------------------------------
struct IdentityTally {
    long checks = 0;
    long failures = 0;
    std::string first_witness;
};

struct IdentityReport {
    std::vector<std::pair<std::string, IdentityTally>> items;

    void record(const std::string& ident, bool ok, const std::string& witness) {
        IdentityTally* t = nullptr;
        for (auto& [n, it] : items)
            if (n == ident) t = &it;
        if (!t) {
            items.emplace_back(ident, IdentityTally{});
            t = &items.back().second;
        }
        t->checks++;
        if (!ok) {
            t->failures++;
            if (t->first_witness.empty()) t->first_witness = witness;
        }
    }
    long total_checks() const {
        long n = 0;
        for (const auto& [k, t] : items) n += t.checks;
        return n;
    }
    long total_failures() const {
        long n = 0;
        for (const auto& [k, t] : items) n += t.failures;
        return n;
    }
    bool pass() const { return total_failures() == 0; }
};

struct SuiteOptions {
    int trials = 10;
    int maxlen = 4;       // tail length cap of random chains
    unsigned seed = 12345;
    int chain_terms = 3;  // up to this many terms per random chain
    bool full_pq_grid = true;  // all four cochain parity combinations per trial
    size_t arity_cap = kArityCap;  // tabulation cap for bracket cochains
};

using SuiteRng = std::mt19937;

inline int suite_int(SuiteRng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Chain random_chain(const AInfty& A, SuiteRng& rng, int maxlen = 4,
                          int maxterms = 3) {
    std::vector<Term> ts;
    int nterms = suite_int(rng, 1, maxterms);
    for (int t = 0; t < nterms; t++) {
        Term tm;
        tm.c = Scalar(suite_int(rng, -3, 3));
        if (tm.c.is_zero()) tm.c = Scalar(1);
        tm.m.t = A.t_trunc > 1 ? suite_int(rng, 0, A.t_trunc - 1) : 0;
        tm.m.u = suite_int(rng, 0, 1);
        tm.m.a = (A.ew_aux != Scalar(0)) ? suite_int(rng, -1, 1) : 0;
        int k = A.dim() > 1 ? suite_int(rng, 0, maxlen) : 0;
        tm.w.push_back(suite_int(rng, 0, static_cast<int>(A.dim()) - 1));
        for (int j = 0; j < k; j++) {
            int b = suite_int(rng, 0, static_cast<int>(A.dim()) - 2);
            if (b >= A.unit) b++;
            tm.w.push_back(b);
        }
        ts.push_back(tm);
    }
    return hdetail::canonical(std::move(ts), A);
}

inline Cochain random_cochain(const AInfty& A, SuiteRng& rng, int parity) {
    Cochain c;
    c.parity = parity;
    int max_ar = A.dim() > 1 ? 3 : 0;
    for (int arity = 0; arity <= max_ar; arity++) {
        int ntup = arity == 0 ? 1 : 3;
        for (int s = 0; s < ntup; s++) {
            std::vector<int> in;
            for (int j = 0; j < arity; j++) {
                int b = suite_int(rng, 0, static_cast<int>(A.dim()) - 2);
                if (b >= A.unit) b++;
                in.push_back(b);
            }
            int want = parity;
            for (int b : in) want = (want + A.shifted(b)) & 1;
            Elem v;
            for (size_t b = 0; b < A.dim(); b++) {
                Mono m;
                m.t = A.t_trunc > 1 ? suite_int(rng, 0, A.t_trunc - 1) : 0;
                if (((A.shifted(static_cast<int>(b)) + A.mono_parity(m)) & 1) != want)
                    continue;
                int cc = suite_int(rng, -2, 2);
                if (cc) v.push_back({Scalar(cc), m, static_cast<int>(b)});
            }
            if (!v.empty()) c.set(in, hdetail::elem_normalize(std::move(v), A));
        }
    }
    return c;
}

namespace idetail {

inline bool chain_eq(const Chain& x, const Chain& y, const AInfty& A) {
    Chain d = hdetail::chain_add(x, hdetail::chain_scale(y, Scalar(-1), Mono{}, A), A);
    return d.terms.empty();
}

using Op = std::function<Chain(const Chain&)>;

inline Chain commut(const AInfty& A, const Op& f, int pf, const Op& g, int pg,
                    const Chain& x) {
    Chain a = f(g(x)), b = g(f(x));
    int sgn = (pf * pg) & 1;
    return hdetail::chain_add(
        a, hdetail::chain_scale(b, sgn ? Scalar(1) : Scalar(-1), Mono{}, A), A);
}

// (phi cup psi, x) without tabulating the cup cochain: evaluate the brace on
// the tails actually present in x.
inline RingPoly pairing_with_cup(const AInfty& A, const Cochain& phi,
                                 const Cochain& psi, const Chain& x) {
    int cpar = (1 + phi.parity + psi.parity) & 1;
    int neg = (phi.parity + 1) & 1;  // (-1)^{|phi|} from cup = +-M^2
    RingPoly out;
    for (const auto& t : x.terms) {
        const auto& w = t.w;
        size_t k = w.size() - 1;
        std::vector<int> tail(w.begin() + 1, w.end());
        bool reduced = true;
        for (int b : tail)
            if (b == A.unit) reduced = false;
        if (!reduced) continue;  // cup lives on reduced cochains
        Elem v = m2_brace_eval(A, phi, psi, tail);
        if (v.empty()) continue;
        int etail = hdetail::eps(A, w, 1, k + 1);
        int sgn = (A.par[w[0]] * (etail + 1) + cpar * A.mono_parity(t.m) + neg) & 1;
        RingPoly p = elem_pair(A, v, w[0]);
        for (const auto& [mo, c] : p) {
            Scalar cc = t.c * c;
            if (sgn) cc = -cc;
            hdetail::rp_add(out, mo * t.m, cc, A);
        }
    }
    return out;
}

inline void pairing_props(const AInfty& A, const std::string& nm, IdentityReport& rep) {
    for (size_t a = 0; a < A.dim(); a++)
        for (size_t b = 0; b < A.dim(); b++) {
            Scalar lhs = A.pairing(a, b);
            Scalar rhs = A.pairing(b, a);
            if ((A.shifted(static_cast<int>(a)) * A.shifted(static_cast<int>(b)) + 1) & 1)
                rhs = -rhs;
            rep.record("pairing-antisymmetry", lhs == rhs,
                       nm + " " + A.names[a] + "," + A.names[b]);
        }
    Cochain m = m_cochain(A);
    auto pr = [&](const Elem& v, int head) {
        RingPoly p;
        for (const auto& re : v)
            hdetail::rp_add(p, re.m, re.c * A.pairing(re.b, head), A);
        return p;
    };
    for (size_t a = 0; a < A.dim(); a++)
        for (size_t b = 0; b < A.dim(); b++) {
            for (size_t cb = 0; cb < A.dim(); cb++) {
                Elem l = hdetail::eval(A, m, {(int)a, (int)b});
                Elem r = hdetail::eval(A, m, {(int)cb, (int)a});
                RingPoly lp = pr(l, (int)cb), rp = pr(r, (int)b);
                int sgn = (A.shifted((int)cb) *
                           (A.shifted((int)a) + A.shifted((int)b))) & 1;
                if (sgn)
                    for (auto& [mo, c] : rp) c = -c;
                rep.record("pairing-cyclicity-m2", lp == rp,
                           nm + " " + A.names[a] + A.names[b] + A.names[cb]);
            }
            RingPoly lp = pr(hdetail::eval(A, m, {(int)a}), (int)b);
            RingPoly rp = pr(hdetail::eval(A, m, {(int)b}), (int)a);
            if ((A.shifted((int)a) * A.shifted((int)b)) & 1)
                for (auto& [mo, c] : rp) c = -c;
            rep.record("pairing-cyclicity-m1", lp == rp,
                       nm + " " + A.names[a] + A.names[b]);
        }
}

}  // namespace idetail

inline void identity_suite(const AInfty& A, const std::string& nm,
                           const SuiteOptions& opt, IdentityReport& rep) {
    using idetail::chain_eq;
    using idetail::commut;
    using idetail::Op;
    using hdetail::chain_add;
    using hdetail::chain_scale;
    SuiteRng rng(opt.seed);

    auto ain = verify_ainfty(A, 4);
    rep.record("ainfty-relations", ain.pass, nm + " @" + ain.witness);
    if (A.has_pairing) idetail::pairing_props(A, nm, rep);

    Op b = [&](const Chain& x) { return hochschild_b(A, x); };
    Op B = [&](const Chain& x) { return connes_B(A, x); };
    Op buB = [&](const Chain& x) { return b_plus_uB(A, x); };
    Op gam = [&](const Chain& x) { return length_gamma(A, x); };
    Cochain mp = m_prime(A);
    Cochain mc = m_cochain(A);
    // Operations with odd-aux coefficients satisfy the A-infinity relations
    // only on the reduced part, so homotopy identities built from the full
    // bracket with m are not asserted for them.
    bool odd_aux_ops = false;
    if (A.aux_parity & 1)
        for (const auto& tab : A.mtab)
            for (const auto& [in, val] : tab)
                for (const auto& re : val)
                    if (re.m.a & 1) odd_aux_ops = true;

    for (int t = 0; t < opt.trials; t++) {
        Chain x = random_chain(A, rng, opt.maxlen, opt.chain_terms);
        rep.record("b^2=0", chain_eq(b(b(x)), Chain{}, A), nm);
        rep.record("B^2=0", chain_eq(B(B(x)), Chain{}, A), nm);
        rep.record("bB+Bb=0", chain_eq(chain_add(b(B(x)), B(b(x)), A), Chain{}, A), nm);
        rep.record("(b+uB)^2=0", chain_eq(buB(buB(x)), Chain{}, A), nm);
        rep.record("L_m=b", chain_eq(lie_derivative(A, mc, x), b(x), A), nm);
        {
            Chain lhs = commut(A, gam, 0, b, 1, x);
            Chain rhs = chain_add(
                b(x), chain_scale(lie_derivative(A, mp, x), Scalar(-1), Mono{}, A), A);
            rep.record("[Gamma,b]=b-L_m'", chain_eq(lhs, rhs, A), nm);
        }
        rep.record("[Gamma,B]=-B",
                   chain_eq(commut(A, gam, 0, B, 1, x),
                            chain_scale(B(x), Scalar(-1), Mono{}, A), A),
                   nm);
        for (int p = 0; p <= 1; p++) {
            Cochain phi = random_cochain(A, rng, p);
            Op Lphi = [&](const Chain& y) { return lie_derivative(A, phi, y); };
            Op iphi = [&](const Chain& y) { return contraction(A, phi, y); };
            Cochain mphi = gerstenhaber(A, mc, phi, opt.arity_cap);
            if (!odd_aux_ops) {
                Chain cl = commut(A, iphi, (p + 1) & 1, buB, 1, x);
                Chain cr = chain_add(u_scale(A, Lphi(x), 1), contraction(A, mphi, x), A);
                if ((p & 1) == 0) cr = chain_scale(cr, Scalar(-1), Mono{}, A);
                rep.record("cartan-homotopy", chain_eq(cl, cr, A),
                           nm + " p" + std::to_string(p));
            }
            rep.record("[b,L_phi]=L_[m,phi]",
                       chain_eq(commut(A, b, 1, Lphi, p, x),
                                lie_derivative(A, mphi, x), A),
                       nm + " p" + std::to_string(p));
            rep.record("[B,L_phi]=0",
                       chain_eq(commut(A, B, 1, Lphi, p, x), Chain{}, A),
                       nm + " p" + std::to_string(p));
            if (A.has_pairing) {
                RingPoly d1 = chain_pairing(A, mphi, x);
                RingPoly d2 = chain_pairing(A, phi, b(x));
                if ((p + 1) & 1)
                    for (auto& [mo, c] : d2) c = -c;
                for (auto& [mo, c] : d2) hdetail::rp_add(d1, mo, c, A);
                rep.record("pairing-descent", d1.empty(), nm + " p" + std::to_string(p));
            }
            int qlo = opt.full_pq_grid ? 0 : ((t + p) & 1);
            int qhi = opt.full_pq_grid ? 1 : qlo;
            for (int q = qlo; q <= qhi; q++) {
                Cochain psi = random_cochain(A, rng, q);
                Op Lpsi = [&](const Chain& y) { return lie_derivative(A, psi, y); };
                Chain jl =
                    lie_derivative(A, gerstenhaber(A, psi, phi, opt.arity_cap), x);
                Chain jr = commut(A, Lpsi, q, Lphi, p, x);
                rep.record("L-jacobi", chain_eq(jl, jr, A),
                           nm + " " + std::to_string(p) + std::to_string(q));
                if (A.has_pairing) {
                    RingPoly a1 = idetail::pairing_with_cup(A, phi, psi, x);
                    RingPoly a2 = chain_pairing(A, phi, cap(A, psi, x));
                    rep.record("cup-cap-adjunction", a1 == a2,
                               nm + " " + std::to_string(p) + std::to_string(q));
                }
            }
        }
        if (A.has_grading) {
            Op gm = [&](const Chain& y) { return gr_minus(A, y); };
            rep.record("[Gr-,b+uB]=b+uB",
                       chain_eq(commut(A, gm, 0, buB, 1, x), buB(x), A), nm);
            // u^2(nabla~ - nabla) = -[i{deg/2}, b+uB]
            Cochain dg = deg_cochain(A);
            Chain lhs = chain_add(
                chain_scale(u_scale(A, lie_derivative(A, dg, x), 1), Scalar(1, 2),
                            Mono{}, A),
                chain_add(contraction(A, euler_of_m(A), x),
                          chain_scale(contraction(A, mp, x), Scalar(-1, 2), Mono{}, A),
                          A),
                A);
            Op idg = [&](const Chain& y) { return contraction(A, dg, y); };
            Chain rhs =
                chain_scale(commut(A, idg, 1, buB, 1, x), Scalar(-1, 2), Mono{}, A);
            rep.record("euler-homotopy", chain_eq(lhs, rhs, A), nm);
        }
        if (A.t_trunc > 1 && A.aux_parity == 0) {
            // d/dt lowers the t-truncation order by one, so flatness of the
            // Getzler-Gauss-Manin connection holds modulo t^{M-1}.
            Op nab = [&](const Chain& y) { return ggm_connection(A, y); };
            Chain resid = commut(A, nab, A.t_parity & 1, buB, 1, x);
            bool ok = true;
            for (const auto& tt : resid.terms)
                if (tt.m.t < A.t_trunc - 1) ok = false;
            rep.record("ggm-flatness", ok, nm);
        }
    }
}

}  // namespace teplab
