#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "connection.hpp"

namespace teplab {
namespace detail {

inline std::optional<mpq_class> sqrt_rational(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    mpq_class r(rn, rd);
    r.canonicalize();
    return r;
}

// Exact square root in Q(i) when one exists.
inline std::optional<Scalar> sqrt_scalar(const Scalar& s) {
    if (s.is_zero()) return Scalar(0);
    if (s.is_real()) {
        if (auto r = sqrt_rational(s.re())) return Scalar(*r);
        mpq_class neg = -s.re();
        if (auto r = sqrt_rational(neg)) return Scalar(mpq_class(0), *r);
        return std::nullopt;
    }
    // (x+iy)^2 = a+ib: x^2 = (a+r)/2 with r = sqrt(a^2+b^2), y = b/2x.
    auto r = sqrt_rational(s.norm());
    if (!r) return std::nullopt;
    mpq_class t = (s.re() + *r) / 2;
    t.canonicalize();
    auto x = sqrt_rational(t);
    if (!x || *x == 0) return std::nullopt;
    mpq_class y = s.im() / (2 * (*x));
    y.canonicalize();
    Scalar root(*x, y);
    if (root * root != s) return std::nullopt;
    return root;
}

// poly: coefficients ascending.  Evaluation and synthetic deflation.
inline Scalar poly_eval(const std::vector<Scalar>& p, const Scalar& x) {
    Scalar acc;
    for (size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return acc;
}

inline std::vector<Scalar> poly_deflate(const std::vector<Scalar>& p, const Scalar& root) {
    std::vector<Scalar> q(p.size() - 1);
    Scalar carry = p.back();
    for (size_t k = p.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = p[k] + carry * root;
    }
    return q;
}

inline std::vector<mpz_class> divisors(const mpz_class& n0) {
    mpz_class n = abs(n0);
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= n; d++) {
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    }
    return out;
}

struct GaussInt {
    mpz_class a, b;  // a + b*i
};

inline std::vector<GaussInt> gauss_divisors(const GaussInt& z) {
    mpz_class n = z.a * z.a + z.b * z.b;
    std::vector<GaussInt> out;
    for (mpz_class a = 0; a * a <= n; a++)
        for (mpz_class b = 0; a * a + b * b <= n; b++) {
            if (a == 0 && b == 0) continue;
            mpz_class dn = a * a + b * b;
            if (n % dn != 0) continue;
            // (z / (a+bi)) must have integral parts.
            mpz_class ra = z.a * a + z.b * b, rb = z.b * a - z.a * b;
            if (ra % dn == 0 && rb % dn == 0) {
                out.push_back({a, b});
                if (b != 0 || a != 0) out.push_back({-a, b});
                out.push_back({a, -b});
                out.push_back({-a, -b});
            }
        }
    return out;
}

// One root of p over Q(i), or nullopt.  p monic-ish, degree >= 1.
inline std::optional<Scalar> find_root(const std::vector<Scalar>& p) {
    size_t deg = p.size() - 1;
    if (deg == 0) return std::nullopt;
    if (deg == 1) return -p[0] / p[1];
    if (poly_eval(p, Scalar(0)).is_zero()) return Scalar(0);

    // Clear denominators.
    mpz_class D = 1;
    bool complex_coeffs = false;
    for (const auto& c : p) {
        D = lcm(D, c.re().get_den());
        D = lcm(D, c.im().get_den());
        if (!c.is_real()) complex_coeffs = true;
    }
    std::vector<Scalar> ip;
    for (const auto& c : p) ip.push_back(Scalar(mpq_class(D)) * c);

    if (!complex_coeffs) {
        mpz_class a0 = ip[0].re().get_num(), an = ip[deg].re().get_num();
        for (const auto& num : divisors(a0))
            for (const auto& den : divisors(an)) {
                for (int sign : {1, -1}) {
                    mpq_class cand(sign * num, den);
                    cand.canonicalize();
                    Scalar x{cand};
                    if (poly_eval(p, x).is_zero()) return x;
                }
            }
        // Purely imaginary rational roots (x = iy turns up for even real polys).
        for (const auto& num : divisors(a0))
            for (const auto& den : divisors(an)) {
                for (int sign : {1, -1}) {
                    mpq_class cand(sign * num, den);
                    cand.canonicalize();
                    Scalar x(mpq_class(0), cand);
                    if (poly_eval(p, x).is_zero()) return x;
                }
            }
    } else {
        GaussInt g0{ip[0].re().get_num(), ip[0].im().get_num()};
        GaussInt gn{ip[deg].re().get_num(), ip[deg].im().get_num()};
        auto nums = gauss_divisors(g0);
        auto dens = gauss_divisors(gn);
        for (const auto& num : nums)
            for (const auto& den : dens) {
                Scalar x = Scalar(mpq_class(num.a), mpq_class(num.b)) /
                           Scalar(mpq_class(den.a), mpq_class(den.b));
                if (poly_eval(p, x).is_zero()) return x;
            }
    }

    if (deg == 2) {
        Scalar a = p[2], b = p[1], c = p[0];
        Scalar disc = b * b - Scalar(4) * a * c;
        if (auto r = sqrt_scalar(disc))
            return (-b + *r) / (Scalar(2) * a);
    }
    return std::nullopt;
}

}  // namespace detail

struct EigenvalueMult {
    Scalar value;
    size_t multiplicity;
};

// Exact spectrum with multiplicities, sorted by (re, im).  Throws
// IrrationalSpectrum if the characteristic polynomial does not split over
// the working field.
inline std::vector<EigenvalueMult> spectrum(const Matrix& A, Field field = Field::QI) {
    std::vector<Scalar> p = A.charpoly();
    std::vector<Scalar> roots;
    while (p.size() > 1) {
        auto r = detail::find_root(p);
        if (!r) throw IrrationalSpectrum("characteristic polynomial does not split over the working field");
        if (field == Field::Q && !r->is_real())
            throw IrrationalSpectrum("eigenvalue " + r->str() + " not in Q");
        roots.push_back(*r);
        p = detail::poly_deflate(p, *r);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<EigenvalueMult> out;
    for (const auto& r : roots) {
        if (!out.empty() && out.back().value == r)
            out.back().multiplicity++;
        else
            out.push_back({r, 1});
    }
    return out;
}

}  // namespace teplab
