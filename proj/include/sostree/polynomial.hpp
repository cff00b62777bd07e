#ifndef SOSTREE_POLYNOMIAL_HPP
#define SOSTREE_POLYNOMIAL_HPP

// Dense univariate polynomials over any field-like scalar (double for fast
// scans, exact rationals for derivation runs). Coefficients ascending.

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sostree {

template <class T>
class Polynomial {
public:
    Polynomial() = default; // zero polynomial

    explicit Polynomial(std::vector<T> ascending) : c_(std::move(ascending)) { trim(); }

    static Polynomial monomial(std::size_t degree, const T& coeff) {
        std::vector<T> c(degree + 1, T(0));
        c[degree] = coeff;
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }

    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const std::vector<T>& coefficients() const { return c_; }

    T coefficient(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }

    T leading() const {
        if (is_zero()) throw std::invalid_argument("Polynomial: zero polynomial has no leading coefficient");
        return c_.back();
    }

    T evaluate(const T& x) const {
        T acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Polynomial operator-() const {
        std::vector<T> c(c_);
        for (T& v : c) v = -v;
        return Polynomial(std::move(c));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(c));
    }

    friend Polynomial operator*(const T& s, const Polynomial& p) {
        std::vector<T> c(p.c_);
        for (T& v : c) v = s * v;
        return Polynomial(std::move(c));
    }

    // Multiplication by x^k.
    Polynomial shifted(std::size_t k) const {
        if (is_zero()) return Polynomial();
        std::vector<T> c(c_.size() + k, T(0));
        for (std::size_t i = 0; i < c_.size(); ++i) c[i + k] = c_[i];
        return Polynomial(std::move(c));
    }

    struct DivMod {
        Polynomial quotient;
        Polynomial remainder;
    };

    // Euclidean division: num = quotient * den + remainder, deg(rem) < deg(den).
    // Exact over rationals; over doubles the remainder carries roundoff.
    static DivMod divide(const Polynomial& num, const Polynomial& den) {
        if (den.is_zero()) throw std::invalid_argument("Polynomial: division by zero polynomial");
        std::vector<T> rem = num.c_;
        const int dd = den.degree();
        const T& lead = den.c_.back();
        if (num.degree() < dd) return {Polynomial(), num};
        std::vector<T> quo(num.c_.size() - den.c_.size() + 1, T(0));
        for (std::size_t i = quo.size(); i-- > 0;) {
            const T q = rem[i + dd] / lead;
            quo[i] = q;
            for (int j = 0; j <= dd; ++j) rem[i + j] -= q * den.c_[j];
        }
        rem.resize(dd > 0 ? static_cast<std::size_t>(dd) : 0);
        return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

// Homogenized composition of `outer` with the fraction num/den:
//   outer(num/den) * den^deg(outer) = sum_k outer[k] * num^k * den^(deg-k).
template <class T>
Polynomial<T> compose_with_fraction(const Polynomial<T>& outer, const Polynomial<T>& num,
                                    const Polynomial<T>& den) {
    if (outer.is_zero()) return Polynomial<T>();
    const std::size_t d = static_cast<std::size_t>(outer.degree());
    std::vector<Polynomial<T>> num_pow(d + 1), den_pow(d + 1);
    num_pow[0] = Polynomial<T>::monomial(0, T(1));
    den_pow[0] = num_pow[0];
    for (std::size_t k = 1; k <= d; ++k) {
        num_pow[k] = num_pow[k - 1] * num;
        den_pow[k] = den_pow[k - 1] * den;
    }
    Polynomial<T> acc;
    for (std::size_t k = 0; k <= d; ++k) {
        const T ck = outer.coefficient(k);
        if (ck == T(0)) continue;
        acc = acc + ck * (num_pow[k] * den_pow[d - k]);
    }
    return acc;
}

} // namespace sostree

#endif
