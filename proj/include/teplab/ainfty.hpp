#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "matrix.hpp"

namespace teplab {

// ---------------------------------------------------------------------------
// Coefficient ring: K[t]/(t^M) [aux^{+-1}] [u^{+-1}], with t and aux carrying a
// chosen Z/2 parity (aux is the deformation variable e or s; u is even).
// Monomials in a single variable commute, so ring products are sign-free;
// Koszul transport signs appear only when coefficients move past module
// elements, per the stated R-multilinearity rules.
// ---------------------------------------------------------------------------
struct Mono {
    int t = 0, a = 0, u = 0;
    friend bool operator<(const Mono& x, const Mono& y) {
        if (x.t != y.t) return x.t < y.t;
        if (x.a != y.a) return x.a < y.a;
        return x.u < y.u;
    }
    friend bool operator==(const Mono& x, const Mono& y) {
        return x.t == y.t && x.a == y.a && x.u == y.u;
    }
    Mono operator*(const Mono& o) const { return {t + o.t, a + o.a, u + o.u}; }
};

// c * mono * basis[b]: one term of an algebra element.
struct RingElem {
    Scalar c;
    Mono m;
    int b;
};
using Elem = std::vector<RingElem>;

// c * mono * alpha_0[alpha_1|...|alpha_k]: one term of a Hochschild chain.
struct Term {
    Scalar c;
    Mono m;
    std::vector<int> w;  // w[0] head, w[1..] tail
};

struct Chain {
    std::vector<Term> terms;  // canonical: sorted, combined, nonzero
};

// ---------------------------------------------------------------------------
// Finite-dimensional curved cyclic strictly unital A-infinity algebra.
// ---------------------------------------------------------------------------
struct AInfty {
    std::vector<std::string> names;
    std::vector<int> par;  // Z/2 degree |a| of each basis element
    int unit = 0;          // basis index; the unit element is unit_scale * basis[unit]
    Scalar unit_scale{1};
    int t_parity = 0;
    int t_trunc = 1;  // t^M = 0; M = 1 means no t at all
    int aux_parity = 0;
    int n_dim = 0;  // pairing dimension tag
    int Kmax = 2;   // largest arity with a stored operation

    // mtab[k]: inputs (pure basis indices, length k) -> value.
    std::vector<std::map<std::vector<int>, Elem>> mtab;

    Matrix pairing;  // <basis_i, basis_j>, K-valued
    bool has_pairing = false;

    // Euler grading: Gr(mono * a) = (2 ew(mono) + gr_basis[a]) * mono * a,
    // E-weights ew(mono) = ew_aux * a-power + ew_t * t-power.
    bool has_grading = false;
    std::vector<Scalar> gr_basis;
    Scalar ew_aux{0}, ew_t{0};

    size_t dim() const { return names.size(); }
    int shifted(int b) const { return (par[b] + 1) % 2; }  // |a|' mod 2
    int mono_parity(const Mono& m) const {
        int p = m.t * t_parity + m.a * aux_parity;
        return ((p % 2) + 2) % 2;
    }
    Scalar ew(const Mono& m) const {
        return Scalar(m.a) * ew_aux + Scalar(m.t) * ew_t;
    }

    void set_m(size_t k, std::vector<int> in, Elem val) {
        if (mtab.size() <= k) mtab.resize(k + 1);
        if (static_cast<int>(k) > Kmax) Kmax = static_cast<int>(k);
        mtab[k][std::move(in)] = std::move(val);
    }
    const Elem* lookup_m(const std::vector<int>& in) const {
        size_t k = in.size();
        if (k >= mtab.size()) return nullptr;
        auto it = mtab[k].find(in);
        return it == mtab[k].end() ? nullptr : &it->second;
    }
};

// Arity-indexed multilinear map on reduced inputs.  `is_m` marks the
// structure cochain, which is defined on all of A (units included).
struct Cochain {
    int parity = 0;  // shifted degree |phi|' mod 2
    bool is_m = false;
    std::vector<std::map<std::vector<int>, Elem>> tab;

    const Elem* lookup(const std::vector<int>& in) const {
        size_t k = in.size();
        if (k >= tab.size()) return nullptr;
        auto it = tab[k].find(in);
        return it == tab[k].end() ? nullptr : &it->second;
    }
    void set(std::vector<int> in, Elem val) {
        if (tab.size() <= in.size()) tab.resize(in.size() + 1);
        tab[in.size()][std::move(in)] = std::move(val);
    }
};

inline Cochain m_cochain(const AInfty& A) {
    Cochain c;
    c.parity = 1;
    c.is_m = true;
    c.tab.assign(A.mtab.size(), {});
    for (size_t k = 0; k < A.mtab.size(); k++) c.tab[k] = A.mtab[k];
    return c;
}

// m' = sum_k (2-k) m_k.
inline Cochain m_prime(const AInfty& A) {
    Cochain c = m_cochain(A);
    for (size_t k = 0; k < c.tab.size(); k++)
        for (auto& [in, val] : c.tab[k])
            for (auto& e : val) e.c *= Scalar(2 - static_cast<long>(k));
    return c;
}

namespace hdetail {

inline void add_term(std::vector<Term>& acc, Term t, const AInfty& A) {
    if (t.c.is_zero()) return;
    if (t.m.t >= A.t_trunc) return;
    acc.push_back(std::move(t));
}

inline Chain canonical(std::vector<Term> ts, const AInfty& A) {
    std::sort(ts.begin(), ts.end(), [](const Term& x, const Term& y) {
        if (x.w != y.w) return x.w < y.w;
        return x.m < y.m;
    });
    Chain out;
    for (auto& t : ts) {
        if (!out.terms.empty() && out.terms.back().w == t.w &&
            out.terms.back().m == t.m)
            out.terms.back().c += t.c;
        else
            out.terms.push_back(std::move(t));
    }
    std::erase_if(out.terms, [&](const Term& t) {
        return t.c.is_zero() || t.m.t >= A.t_trunc;
    });
    return out;
}

inline Chain chain_add(const Chain& x, const Chain& y, const AInfty& A) {
    std::vector<Term> ts = x.terms;
    ts.insert(ts.end(), y.terms.begin(), y.terms.end());
    return canonical(std::move(ts), A);
}

inline Chain chain_scale(const Chain& x, const Scalar& s, const Mono& m,
                         const AInfty& A) {
    std::vector<Term> ts;
    for (const auto& t : x.terms)
        add_term(ts, {t.c * s, t.m * m, t.w}, A);
    return canonical(std::move(ts), A);
}

inline int eps(const AInfty& A, const std::vector<int>& w, size_t from, size_t to) {
    // sum of shifted parities of tail entries w[from..to) (1-based tail slots)
    int e = 0;
    for (size_t j = from; j < to; j++) e += A.shifted(w[j]);
    return e & 1;
}

// Evaluate a cochain on slots that are either pure basis indices or computed
// elements.  Coefficients of inserted elements are extracted to the front
// with sign |c| * (op parity + shifted parities of the slots before them).
using SlotVal = std::variant<int, Elem>;

inline void eval_op(const AInfty& A, const Cochain& op, const std::vector<SlotVal>& slots,
                    Elem& out, const Scalar& pre, const Mono& pm) {
    // expand one Elem slot at a time (leftmost first)
    for (size_t i = 0; i < slots.size(); i++) {
        if (std::holds_alternative<int>(slots[i])) continue;
        const Elem& e = std::get<Elem>(slots[i]);
        int before = op.parity;
        for (size_t j = 0; j < i; j++) {
            if (std::holds_alternative<int>(slots[j]))
                before += A.shifted(std::get<int>(slots[j]));
            // expanded slots before i are already pure
        }
        for (const auto& re : e) {
            int sgn = (A.mono_parity(re.m) * before) & 1;
            std::vector<SlotVal> next = slots;
            next[i] = re.b;
            Scalar c = pre * re.c;
            if (sgn) c = -c;
            eval_op(A, op, next, out, c, pm * re.m);
        }
        return;
    }
    // all pure: look up
    std::vector<int> in;
    in.reserve(slots.size());
    for (const auto& s : slots) {
        int b = std::get<int>(s);
        if (!op.is_m && b == A.unit) return;  // reduced cochain kills units
        in.push_back(b);
    }
    if (const Elem* v = op.lookup(in))
        for (const auto& re : *v) {
            RingElem r{pre * re.c, pm * re.m, re.b};
            if (!r.c.is_zero() && r.m.t < A.t_trunc) out.push_back(r);
        }
}

inline Elem eval(const AInfty& A, const Cochain& op, const std::vector<SlotVal>& slots) {
    Elem out;
    eval_op(A, op, slots, out, Scalar(1), Mono{});
    return out;
}

}  // namespace hdetail

// ---------------------------------------------------------------------------
// A-infinity relation checker.
// ---------------------------------------------------------------------------
struct AInftyReport {
    bool pass = true;
    std::string witness;
};

// sum over S3[k] of (-1)^{eps_1} m(a^{(1)}, m(a^{(2)}), a^{(3)}) on basis
// tuples up to the given arity, with the unit handled separately: unit
// behaviour is governed by the strict-unit laws, which are asserted directly,
// and the relation is checked on tuples from the non-unit complement.  (For
// aux-deformed operations with odd aux variable the coefficient-transport
// rule makes the relation on unit-containing tuples differ by a sign; the
// strictly unital axioms are relation-on-complement plus unit laws.)
inline AInftyReport verify_ainfty(const AInfty& A, size_t max_arity = 4) {
    Cochain m = m_cochain(A);
    AInftyReport rep;
    std::vector<int> tuple;
    auto check_tuple = [&](const std::vector<int>& in) {
        size_t k = in.size();
        Elem total;
        for (size_t i = 0; i <= k; i++)
            for (size_t j = i; j <= k; j++) {
                int e1 = 0;
                for (size_t p = 0; p < i; p++) e1 += A.shifted(in[p]);
                std::vector<hdetail::SlotVal> inner(in.begin() + i, in.begin() + j);
                Elem mid = hdetail::eval(A, m, inner);
                std::vector<hdetail::SlotVal> outer;
                for (size_t p = 0; p < i; p++) outer.push_back(in[p]);
                outer.push_back(mid);
                for (size_t p = j; p < k; p++) outer.push_back(in[p]);
                Elem v = hdetail::eval(A, m, outer);
                for (auto& re : v) {
                    if (e1 & 1) re.c = -re.c;
                    total.push_back(re);
                }
            }
        // canonicalize
        std::map<std::pair<int, std::vector<int>>, Scalar> acc;
        for (const auto& re : total) {
            auto key = std::make_pair(re.b, std::vector<int>{re.m.t, re.m.a, re.m.u});
            auto [it, fresh] = acc.emplace(key, re.c);
            if (!fresh) it->second += re.c;
        }
        for (const auto& [key, c] : acc)
            if (!c.is_zero()) {
                rep.pass = false;
                std::string w = "(";
                for (size_t p = 0; p < in.size(); p++)
                    w += (p ? "," : "") + A.names[in[p]];
                rep.witness = w + ")";
                return;
            }
    };
    // enumerate tuples of each arity
    std::function<void(size_t)> rec = [&](size_t k) {
        if (!rep.pass) return;
        if (tuple.size() == k) {
            check_tuple(tuple);
            return;
        }
        for (size_t b = 0; b < A.dim(); b++) {
            if (static_cast<int>(b) == A.unit) continue;
            tuple.push_back(static_cast<int>(b));
            rec(k);
            tuple.pop_back();
        }
    };
    for (size_t k = 0; k <= max_arity && rep.pass; k++) rec(k);
    // strict unit laws
    auto elem_is = [&](const Elem& v, int b, const Scalar& c) {
        Elem want;
        if (!c.is_zero()) want.push_back({c, Mono{}, b});
        if (v.size() != want.size()) return false;
        for (size_t i = 0; i < v.size(); i++)
            if (v[i].b != want[i].b || !(v[i].c == want[i].c) ||
                v[i].m.t != want[i].m.t || v[i].m.a != want[i].m.a || v[i].m.u != want[i].m.u)
                return false;
        return true;
    };
    for (size_t b = 0; b < A.dim() && rep.pass; b++) {
        int bi = static_cast<int>(b);
        Elem l = hdetail::eval(A, m, {A.unit, bi});
        Elem r = hdetail::eval(A, m, {bi, A.unit});
        // the strict unit is unit_scale * e, so m_2(e, b) = b / unit_scale
        Scalar ls = Scalar(1) / A.unit_scale;
        Scalar rs = (A.par[b] & 1) ? -ls : ls;
        if (!elem_is(l, bi, ls) || !elem_is(r, bi, rs)) {
            rep.pass = false;
            rep.witness = "unit law at " + A.names[b];
        }
    }
    for (size_t k = 1; k <= max_arity && rep.pass; k++) {
        if (k == 2) continue;
        for (size_t b = 0; b < A.dim() && rep.pass; b++)
            for (size_t pos = 0; pos < k && rep.pass; pos++) {
                std::vector<hdetail::SlotVal> in(k, static_cast<int>(b));
                in[pos] = A.unit;
                if (!hdetail::eval(A, m, in).empty()) {
                    rep.pass = false;
                    rep.witness = "unit law at arity " + std::to_string(k);
                }
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Structural transforms: opposite, negative, s- and e-deformations.
// ---------------------------------------------------------------------------

// m^op_k(a_1..a_k) = (-1)^{dagger(a)} m_k(a_k..a_1); unit becomes -e.
inline AInfty opposite(const AInfty& A) {
    AInfty B = A;
    B.unit_scale = -A.unit_scale;
    for (size_t k = 0; k < A.mtab.size(); k++) {
        B.mtab[k].clear();
        for (const auto& [in, val] : A.mtab[k]) {
            std::vector<int> rev(in.rbegin(), in.rend());
            int dag = 0;
            for (size_t i = 0; i < rev.size(); i++)
                for (size_t j = i + 1; j < rev.size(); j++)
                    dag += A.shifted(rev[i]) * A.shifted(rev[j]);
            Elem v = val;
            if (dag & 1)
                for (auto& re : v) re.c = -re.c;
            B.mtab[k][rev] = std::move(v);
        }
    }
    return B;
}

// m^-_k = (-1)^{k-1} m_k; the strict unit flips with m_2.
inline AInfty negative(const AInfty& A) {
    AInfty B = A;
    B.unit_scale = -A.unit_scale;
    for (size_t k = 0; k < B.mtab.size(); k++) {
        if (k % 2 == 1) continue;  // (-1)^{k-1} = +1 for odd k
        for (auto& [in, val] : B.mtab[k])
            for (auto& re : val) re.c = -re.c;
    }
    return B;
}

// C^s: m_k^s = s^{2-k} m_k, s odd, E = (s/2) d/ds, Gr(s^k a) = k s^k a.
inline AInfty s_deformation(const AInfty& A) {
    if (A.aux_parity != 0 || A.ew_aux != Scalar(0))
        throw OddParityViolation("algebra already carries a deformation variable");
    AInfty B = A;
    B.aux_parity = 1;
    for (size_t k = 0; k < B.mtab.size(); k++)
        for (auto& [in, val] : B.mtab[k])
            for (auto& re : val) re.m.a += 2 - static_cast<int>(k);
    B.has_grading = true;
    B.gr_basis.assign(A.dim(), Scalar(0));
    B.ew_aux = Scalar(1, 2);
    B.ew_t = Scalar(0);
    return B;
}

// C^e: m_k^e = e^{(2-k-|m_k(a)|+sum|a_i|)/2} m_k, e even, E = e d/de,
// Gr(e^k a) = (2k+|a|) e^k a.
inline AInfty e_deformation(const AInfty& A) {
    if (A.aux_parity != 0 || A.ew_aux != Scalar(0))
        throw OddParityViolation("algebra already carries a deformation variable");
    AInfty B = A;
    B.aux_parity = 0;
    for (size_t k = 0; k < B.mtab.size(); k++)
        for (auto& [in, val] : B.mtab[k])
            for (auto& re : val) {
                int s = 0;
                for (int b : in) s += A.par[b];
                int num = 2 - static_cast<int>(k) - (A.par[re.b] + A.mono_parity(re.m)) % 2 + s;
                // exponent must be integral: m is Z/2-graded
                if (((num % 2) + 2) % 2 != 0)
                    throw OddParityViolation("operation violates Z/2 grading");
                re.m.a += num / 2;
            }
    B.has_grading = true;
    B.gr_basis.clear();
    for (size_t b = 0; b < A.dim(); b++) B.gr_basis.push_back(Scalar(A.par[b]));
    B.ew_aux = Scalar(1);
    B.ew_t = Scalar(0);
    return B;
}

// Restriction aux = 1: drop aux exponents (merging coefficients).
inline AInfty restrict_aux(const AInfty& A) {
    AInfty B = A;
    B.aux_parity = 0;
    B.has_grading = false;
    B.ew_aux = Scalar(0);
    for (size_t k = 0; k < B.mtab.size(); k++) {
        std::map<std::vector<int>, Elem> fresh;
        for (auto& [in, val] : B.mtab[k]) {
            Elem merged;
            for (auto re : val) {
                re.m.a = 0;
                merged.push_back(re);
            }
            fresh[in] = std::move(merged);
        }
        B.mtab[k] = std::move(fresh);
    }
    return B;
}

}  // namespace teplab
