#pragma once

#include <functional>

#include "hochschild.hpp"

namespace teplab {
namespace samples {

// Translate an associative product into m_2 via m_2(a,b) = (-1)^{|a|} a b;
// the sign is fixed by requiring the A-infinity relations to hold for a
// generic associative product.
inline AInfty from_assoc(std::vector<std::string> names, std::vector<int> par,
                         int unit,
                         const std::function<Elem(int, int)>& mult) {
    AInfty A;
    A.names = std::move(names);
    A.par = std::move(par);
    A.unit = unit;
    A.mtab.resize(3);
    A.Kmax = 2;
    int d = static_cast<int>(A.dim());
    for (int i = 0; i < d; i++)
        for (int j = 0; j < d; j++) {
            Elem v = mult(i, j);
            if (A.par[i] & 1)
                for (auto& re : v) re.c = -re.c;
            if (!v.empty()) A.mtab[2][{i, j}] = std::move(v);
        }
    return A;
}

inline Elem one(int b, Scalar c = Scalar(1), Mono m = Mono{}) {
    if (c.is_zero()) return {};
    return {{c, m, b}};
}

// Ground field K: basis {e}.
inline AInfty ground_field() {
    AInfty A = from_assoc({"e"}, {0}, 0, [](int, int) { return one(0); });
    A.pairing = Matrix{{Scalar(1)}};
    A.has_pairing = true;
    A.n_dim = 0;
    return A;
}

// 2x2 matrices, basis e = Id, h = E11-E22, x = E12, y = E21, all even;
// pairing <a,b> = tr(ab).
inline AInfty matrix2() {
    enum { E = 0, H = 1, X = 2, Y = 3 };
    auto mult = [](int i, int j) -> Elem {
        if (i == E) return one(j);
        if (j == E) return one(i);
        switch (i * 4 + j) {
            case H * 4 + H: return one(E);
            case H * 4 + X: return one(X);
            case H * 4 + Y: return one(Y, Scalar(-1));
            case X * 4 + H: return one(X, Scalar(-1));
            case Y * 4 + H: return one(Y);
            case X * 4 + Y: return {{Scalar(1, 2), Mono{}, E}, {Scalar(1, 2), Mono{}, H}};
            case Y * 4 + X: return {{Scalar(1, 2), Mono{}, E}, {Scalar(-1, 2), Mono{}, H}};
            default: return {};
        }
    };
    AInfty A = from_assoc({"e", "h", "x", "y"}, {0, 0, 0, 0}, 0, mult);
    A.pairing = Matrix(4, 4);
    A.pairing(0, 0) = Scalar(2);
    A.pairing(1, 1) = Scalar(2);
    A.pairing(2, 3) = Scalar(1);
    A.pairing(3, 2) = Scalar(1);
    A.has_pairing = true;
    A.n_dim = 0;
    return A;
}

// Exterior algebra on one odd generator.
inline AInfty exterior() {
    auto mult = [](int i, int j) -> Elem {
        if (i == 0) return one(j);
        if (j == 0) return one(i);
        return {};  // x*x = 0
    };
    AInfty A = from_assoc({"e", "x"}, {0, 1}, 0, mult);
    A.pairing = Matrix(2, 2);
    A.pairing(0, 1) = Scalar(1);
    A.pairing(1, 0) = Scalar(-1);
    A.has_pairing = true;
    A.n_dim = 1;
    return A;
}

// Clifford algebra K[x]/(x^2 = 1) with x odd.
inline AInfty clifford() {
    auto mult = [](int i, int j) -> Elem {
        if (i == 0) return one(j);
        if (j == 0) return one(i);
        return one(0);  // x*x = e
    };
    AInfty A = from_assoc({"e", "x"}, {0, 1}, 0, mult);
    A.pairing = Matrix(2, 2);
    A.pairing(0, 1) = Scalar(1);
    A.pairing(1, 0) = Scalar(-1);
    A.has_pairing = true;
    A.n_dim = 1;
    return A;
}

// Weak curvature m_0 = w * e (plus optionally c * t * e of positive t-order).
inline AInfty weakly_curved(AInfty A, const Scalar& w, const Scalar& tc = Scalar(0),
                            int t_trunc = 1) {
    Elem m0;
    if (!w.is_zero()) m0.push_back({w * A.unit_scale, Mono{}, A.unit});
    if (!tc.is_zero()) m0.push_back({tc * A.unit_scale, Mono{1, 0, 0}, A.unit});
    if (t_trunc > A.t_trunc) A.t_trunc = t_trunc;
    if (!m0.empty()) A.set_m(0, {}, std::move(m0));
    return A;
}

// Exterior algebra with differential m_1(x) = t e  (t even).
inline AInfty exterior_t() {
    AInfty A = exterior();
    A.t_trunc = 3;
    A.set_m(1, {1}, {{Scalar(1), Mono{1, 0, 0}, 0}});
    return A;
}

// Clifford family x^2 = t: m_2(x,x) = -t e  (t even).
inline AInfty clifford_t() {
    AInfty A = clifford();
    A.t_trunc = 3;
    A.mtab[2][{1, 1}] = {{Scalar(-1), Mono{1, 0, 0}, 0}};
    return A;
}

inline std::vector<std::pair<std::string, AInfty>> zoo() {
    std::vector<std::pair<std::string, AInfty>> out;
    out.emplace_back("K", ground_field());
    out.emplace_back("matrix2", matrix2());
    out.emplace_back("exterior", exterior());
    out.emplace_back("clifford", clifford());
    out.emplace_back("K-curved", weakly_curved(ground_field(), Scalar(3)));
    out.emplace_back("matrix2-curved", weakly_curved(matrix2(), Scalar(2)));
    out.emplace_back("exterior-curved", weakly_curved(exterior(), Scalar(-1)));
    out.emplace_back("clifford-curved", weakly_curved(clifford(), Scalar(5, 2)));
    out.emplace_back("matrix2-t", weakly_curved(matrix2(), Scalar(0), Scalar(1), 3));
    out.emplace_back("exterior-t", exterior_t());
    out.emplace_back("clifford-t", clifford_t());
    out.emplace_back("exterior-t-curved",
                     weakly_curved(exterior_t(), Scalar(2), Scalar(1), 3));
    return out;
}

}  // namespace samples
}  // namespace teplab
