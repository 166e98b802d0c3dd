#pragma once

// Exact integer polynomials and the derivative pair (p_n, q_n) with
//
//   Ai^(n)(x) = p_n(x) Ai(x) + q_n(x) Ai'(x),
//   p_0 = 1, q_0 = 0,  p_{n+1} = p_n' + x q_n,  q_{n+1} = p_n + q_n'.
//
// Coefficients are arbitrary-precision integers so evaluation at integer or
// rational points is exact for every n; double evaluation is provided for
// numeric callers. The recursion is memoized behind a mutex (cheap, grows on
// demand, never shrinks).

#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace airyspec {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<bigint> ascending_coeffs)
        : c_(std::move(ascending_coeffs)) {
        trim();
    }

    static Polynomial constant(long v) { return Polynomial({bigint(v)}); }

    // Degree of the zero polynomial is reported as -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    const bigint& coeff(std::size_t k) const {
        static const bigint zero = 0;
        return k < c_.size() ? c_[k] : zero;
    }
    const std::vector<bigint>& coeffs() const { return c_; }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<bigint> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * k;
        return Polynomial(std::move(d));
    }

    // Multiplication by the monomial x.
    Polynomial shifted_up() const {
        if (c_.empty()) return {};
        std::vector<bigint> d(c_.size() + 1);
        for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k];
        return Polynomial(std::move(d));
    }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<bigint> d(std::max(c_.size(), o.c_.size()), bigint(0));
        for (std::size_t k = 0; k < c_.size(); ++k) d[k] += c_[k];
        for (std::size_t k = 0; k < o.c_.size(); ++k) d[k] += o.c_[k];
        return Polynomial(std::move(d));
    }

    bool operator==(const Polynomial& o) const { return c_ == o.c_; }

    // Horner evaluation; exact for exact argument types.
    bigint operator()(const bigint& x) const {
        bigint v = 0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * x + c_[k];
        return v;
    }
    bigrat operator()(const bigrat& x) const {
        bigrat v = 0;
        for (std::size_t k = c_.size(); k-- > 0;) v = v * x + bigrat(c_[k]);
        return v;
    }
    double operator()(double x) const {
        double v = 0.0;
        for (std::size_t k = c_.size(); k-- > 0;)
            v = v * x + static_cast<double>(c_[k]);
        return v;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<bigint> c_;  // ascending degree
};

// (p_n, q_n) for the n-th Airy derivative. Thread-safe.
inline std::pair<Polynomial, Polynomial> derivative_polynomials(unsigned n) {
    static std::mutex mtx;
    static std::vector<std::pair<Polynomial, Polynomial>> table = {
        {Polynomial::constant(1), Polynomial{}}};
    std::lock_guard<std::mutex> lock(mtx);
    while (table.size() <= n) {
        const auto& [p, q] = table.back();
        Polynomial pn = p.derivative() + q.shifted_up();
        Polynomial qn = p + q.derivative();
        table.emplace_back(std::move(pn), std::move(qn));
    }
    return table[n];
}

}  // namespace airyspec
