#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"

namespace teplab {

// Element of Q(i): re + im*i with exact rational parts.  All arithmetic is
// exact; there is no floating point anywhere in the core.
class Scalar {
public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long n) : re_(n), im_(0) {}  // NOLINT: implicit by design
    Scalar(long num, long den) : re_(num, den == 0 ? 1 : den), im_(0) {
        if (den == 0) throw NotAUnit("zero denominator");
        normalize_();
    }
    explicit Scalar(mpq_class re, mpq_class im = mpq_class(0))
        : re_(std::move(re)), im_(std::move(im)) {
        normalize_();
    }

    static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_integer() const { return im_ == 0 && re_.get_den() == 1; }

    Scalar conj() const { return Scalar(re_, mpq_class(-im_)); }
    mpq_class norm() const {
        mpq_class n = re_ * re_ + im_ * im_;
        n.canonicalize();
        return n;
    }

    Scalar operator-() const { return Scalar(mpq_class(-re_), mpq_class(-im_)); }

    Scalar& operator+=(const Scalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        normalize_();
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        normalize_();
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = r;
        im_ = m;
        normalize_();
        return *this;
    }
    Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    // Lexicographic; used for canonical ordering of spectra, not magnitude.
    friend bool operator<(const Scalar& a, const Scalar& b) {
        if (a.re_ != b.re_) return a.re_ < b.re_;
        return a.im_ < b.im_;
    }

    Scalar inverse() const {
        if (is_zero()) throw NotAUnit("division by zero in Q(i)");
        mpq_class n = norm();
        mpq_class r = re_ / n;
        mpq_class m = -im_ / n;
        r.canonicalize();
        m.canonicalize();
        return Scalar(r, m);
    }

    // Canonical form: "p/q" (or "p" when q = 1) for real values, "a+b*i" /
    // "a-b*i" with both parts rendered, "b*i" when the real part vanishes,
    // bare "i" coefficient never abbreviated.  Parse accepts exactly what we
    // print plus surrounding whitespace.
    std::string str() const {
        if (im_ == 0) return rat_str_(re_);
        std::string imag = rat_str_(im_) + "*i";
        if (re_ == 0) return imag;
        if (im_ > 0) return rat_str_(re_) + "+" + imag;
        return rat_str_(re_) + imag;  // the minus sign is part of rat_str_
    }

    static Scalar parse(std::string_view text) {
        size_t b = 0, e = text.size();
        while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) b++;
        while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) e--;
        std::string_view s = text.substr(b, e - b);
        if (s.empty()) throw ParseError("empty scalar");

        // Split off a trailing "*i" term if present.
        size_t star = s.rfind("*i");
        if (star != std::string_view::npos && star + 2 == s.size()) {
            std::string_view head = s.substr(0, star);
            // Find the sign separating real and imaginary parts.  Skip a
            // leading sign and any sign directly after '/'.
            size_t split = std::string_view::npos;
            for (size_t k = head.size(); k-- > 1;) {
                if ((head[k] == '+' || head[k] == '-') && head[k - 1] != '/')
                    {
                        split = k;
                        break;
                    }
            }
            if (split == std::string_view::npos)
                return Scalar(mpq_class(0), parse_rat_(head));
            mpq_class re = parse_rat_(head.substr(0, split));
            std::string_view imtext = head.substr(split);
            if (imtext == "+") throw ParseError("dangling sign in scalar");
            return Scalar(re, parse_rat_(imtext[0] == '+' ? imtext.substr(1) : imtext));
        }
        return Scalar(parse_rat_(s));
    }

private:
    void normalize_() {
        re_.canonicalize();
        im_.canonicalize();
    }

    static std::string rat_str_(const mpq_class& q) { return q.get_str(); }

    static mpq_class parse_rat_(std::string_view s) {
        if (s.empty()) throw ParseError("empty rational");
        std::string owned(s);
        for (char c : owned)
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
                throw ParseError("bad character in rational '" + owned + "'");
        mpq_class q;
        if (q.set_str(owned, 10) != 0) throw ParseError("malformed rational '" + owned + "'");
        if (q.get_den() == 0) throw ParseError("zero denominator in '" + owned + "'");
        q.canonicalize();
        return q;
    }

    mpq_class re_, im_;
};

inline Scalar operator*(long n, const Scalar& s) { return Scalar(n) * s; }

}  // namespace teplab
