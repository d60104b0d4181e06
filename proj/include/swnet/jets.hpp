#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace swnet {

inline constexpr int kMaxJet = 10;  // coefficients per jet; supports schemes up to order 8

struct JetDomainError : std::runtime_error {
    explicit JetDomainError(const std::string& w) : std::runtime_error(w) {}
};

/// Univariate truncated Taylor value: coefficients c[l] = d^l f / dl! with
/// respect to one scalar parameter (time). Ring operations truncate at the
/// common length.
class Jet1 {
public:
    Jet1() = default;
    Jet1(int len, double c0) : n_(len) { c_.fill(0.0); c_[0] = c0; }

    static Jet1 constant(double v, int len) { return Jet1(len, v); }
    /// Seed for the independent variable: value v, first derivative 1.
    static Jet1 variable(double v, int len) {
        Jet1 j(len, v);
        if (len > 1) j.c_[1] = 1.0;
        return j;
    }

    int size() const { return n_; }
    double& operator[](int l) { return c_[l]; }
    double operator[](int l) const { return c_[l]; }

    /// l-th derivative (un-normalized).
    double deriv(int l) const {
        double f = 1.0;
        for (int i = 2; i <= l; ++i) f *= i;
        return c_[l] * f;
    }

    double eval(double t) const {
        double acc = 0.0;
        for (int l = n_ - 1; l >= 0; --l) acc = acc * t + c_[l];
        return acc;
    }

    /// Mean value of the truncated polynomial over [0, dt].
    double mean(double dt) const {
        double acc = 0.0;
        for (int l = n_ - 1; l >= 0; --l) acc = acc * dt + c_[l] / (l + 1);
        return acc;
    }

    Jet1 operator-() const {
        Jet1 r = *this;
        for (int l = 0; l < n_; ++l) r.c_[l] = -r.c_[l];
        return r;
    }

    friend Jet1 operator+(const Jet1& a, const Jet1& b) {
        Jet1 r(common(a, b), 0.0);
        for (int l = 0; l < r.n_; ++l) r.c_[l] = a.c_[l] + b.c_[l];
        return r;
    }
    friend Jet1 operator-(const Jet1& a, const Jet1& b) {
        Jet1 r(common(a, b), 0.0);
        for (int l = 0; l < r.n_; ++l) r.c_[l] = a.c_[l] - b.c_[l];
        return r;
    }
    friend Jet1 operator*(const Jet1& a, const Jet1& b) {
        Jet1 r(common(a, b), 0.0);
        for (int i = 0; i < r.n_; ++i)
            for (int j = 0; i + j < r.n_; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        return r;
    }
    friend Jet1 operator/(const Jet1& a, const Jet1& b) {
        if (b.c_[0] == 0.0) throw JetDomainError("Jet1: division by zero-jet");
        Jet1 r(common(a, b), 0.0);
        for (int l = 0; l < r.n_; ++l) {
            double acc = a.c_[l];
            for (int j = 1; j <= l; ++j) acc -= b.c_[j] * r.c_[l - j];
            r.c_[l] = acc / b.c_[0];
        }
        return r;
    }

    friend Jet1 operator+(const Jet1& a, double s) { Jet1 r = a; r.c_[0] += s; return r; }
    friend Jet1 operator+(double s, const Jet1& a) { return a + s; }
    friend Jet1 operator-(const Jet1& a, double s) { Jet1 r = a; r.c_[0] -= s; return r; }
    friend Jet1 operator-(double s, const Jet1& a) { return -(a - s); }
    friend Jet1 operator*(const Jet1& a, double s) {
        Jet1 r = a;
        for (int l = 0; l < r.n_; ++l) r.c_[l] *= s;
        return r;
    }
    friend Jet1 operator*(double s, const Jet1& a) { return a * s; }
    friend Jet1 operator/(const Jet1& a, double s) { return a * (1.0 / s); }
    friend Jet1 operator/(double s, const Jet1& a) { return Jet1(a.n_, s) / a; }

private:
    static int common(const Jet1& a, [[maybe_unused]] const Jet1& b) {
        assert(a.n_ == b.n_);
        return a.n_;
    }
    int n_ = 0;
    std::array<double, kMaxJet> c_{};
};

/// Bivariate truncated Taylor series in (t, x), total degree < len.
/// coef(a, b) multiplies t^a x^b and is normalized by a! b!.
class BiSeries {
public:
    BiSeries() = default;
    explicit BiSeries(int len, double c00 = 0.0) : n_(len) {
        c_.fill(0.0);
        c_[0] = c00;
    }

    int size() const { return n_; }
    double& at(int a, int b) { return c_[a * kMaxJet + b]; }
    double at(int a, int b) const { return c_[a * kMaxJet + b]; }

    /// Partial derivative in x as a series of the same truncation length
    /// (top-degree information is lost, as usual for truncated jets).
    BiSeries dx() const {
        BiSeries r(n_);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; a + b < n_ - 1; ++b) r.at(a, b) = (b + 1) * at(a, b + 1);
        return r;
    }

    friend BiSeries operator+(const BiSeries& u, const BiSeries& v) {
        BiSeries r(common(u, v));
        for (int a = 0; a < r.n_; ++a)
            for (int b = 0; a + b < r.n_; ++b) r.at(a, b) = u.at(a, b) + v.at(a, b);
        return r;
    }
    friend BiSeries operator-(const BiSeries& u, const BiSeries& v) {
        BiSeries r(common(u, v));
        for (int a = 0; a < r.n_; ++a)
            for (int b = 0; a + b < r.n_; ++b) r.at(a, b) = u.at(a, b) - v.at(a, b);
        return r;
    }
    BiSeries operator-() const {
        BiSeries r(n_);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; a + b < n_; ++b) r.at(a, b) = -at(a, b);
        return r;
    }
    friend BiSeries operator*(const BiSeries& u, const BiSeries& v) {
        BiSeries r(common(u, v));
        for (int a1 = 0; a1 < r.n_; ++a1)
            for (int b1 = 0; a1 + b1 < r.n_; ++b1) {
                const double uc = u.at(a1, b1);
                if (uc == 0.0) continue;
                for (int a2 = 0; a1 + b1 + a2 < r.n_; ++a2)
                    for (int b2 = 0; a1 + b1 + a2 + b2 < r.n_; ++b2)
                        r.at(a1 + a2, b1 + b2) += uc * v.at(a2, b2);
            }
        return r;
    }
    friend BiSeries operator/(const BiSeries& u, const BiSeries& v) {
        if (v.at(0, 0) == 0.0) throw JetDomainError("BiSeries: division by zero constant term");
        BiSeries r(common(u, v));
        // solve r*v = u by increasing total degree
        for (int deg = 0; deg < r.n_; ++deg) {
            for (int a = deg; a >= 0; --a) {
                const int b = deg - a;
                double acc = u.at(a, b);
                for (int a2 = 0; a2 <= a; ++a2)
                    for (int b2 = 0; b2 <= b; ++b2) {
                        if (a2 == a && b2 == b) continue;
                        acc -= r.at(a2, b2) * v.at(a - a2, b - b2);
                    }
                r.at(a, b) = acc / v.at(0, 0);
            }
        }
        return r;
    }
    friend BiSeries operator*(const BiSeries& u, double s) {
        BiSeries r = u;
        for (int a = 0; a < r.n_; ++a)
            for (int b = 0; a + b < r.n_; ++b) r.at(a, b) *= s;
        return r;
    }
    friend BiSeries operator*(double s, const BiSeries& u) { return u * s; }
    friend BiSeries operator+(const BiSeries& u, double s) { BiSeries r = u; r.at(0, 0) += s; return r; }

private:
    static int common(const BiSeries& u, [[maybe_unused]] const BiSeries& v) {
        assert(u.size() == v.size());
        return u.size();
    }
    int n_ = 0;
    std::array<double, kMaxJet * kMaxJet> c_{};
};

/// Derivative jet of a two-component state in a single variable (x or t).
/// d[c][l] holds the raw derivative d^l u_c, l = 0..len-1, at the anchor.
struct CompJet {
    int len = 0;
    double anchor = 0.0;
    std::array<std::array<double, kMaxJet>, 2> d{};

    static CompJet constant(double u0, double u1, int len) {
        CompJet j;
        j.len = len;
        j.d[0][0] = u0;
        j.d[1][0] = u1;
        return j;
    }

    std::array<double, 2> value() const { return {d[0][0], d[1][0]}; }

    std::array<double, 2> eval(double s) const {
        std::array<double, 2> u{};
        double fact[kMaxJet];
        fact[0] = 1.0;
        for (int l = 1; l < len; ++l) fact[l] = fact[l - 1] * l;
        for (int c = 0; c < 2; ++c) {
            double acc = 0.0;
            for (int l = len - 1; l >= 0; --l) acc = acc * s + d[c][l] / fact[l];
            u[c] = acc;
        }
        return u;
    }

    Jet1 component(int c, int len_out) const {
        Jet1 j(len_out, 0.0);
        double fact = 1.0;
        for (int l = 0; l < len_out; ++l) {
            if (l > 0) fact *= l;
            j[l] = l < len ? d[c][l] / fact : 0.0;
        }
        return j;
    }
};

using SpatialJet = CompJet;
using TimeJet = CompJet;

/// Taylor-mode propagation of a smooth map through truncated jets: the output
/// jet's coefficients are the time derivatives of fn(inputs(t)) at t = 0.
inline std::vector<Jet1> propagate(
    const std::function<std::vector<Jet1>(const std::vector<Jet1>&)>& fn,
    const std::vector<Jet1>& inputs) {
    return fn(inputs);
}

}  // namespace swnet
