#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kahler/error.hpp"

namespace kahler {

/// Real polynomial in a fixed number of variables, stored sparsely as
/// exponent vector -> coefficient. Zero coefficients are never stored.
///
/// For a ThetaField on R^(2*m_bar) the variables are ordered
/// (x_1..x_mbar, y_1..y_mbar), so variable index a is the coordinate whose
/// partial derivative is the basis vector v_a.
class Polynomial {
public:
    using Exponents = std::vector<int>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0) throw InvalidArgument("Polynomial: negative variable count");
    }

    static Polynomial constant(int nvars, double c) {
        Polynomial p(nvars);
        p.add_term(Exponents(static_cast<std::size_t>(nvars), 0), c);
        return p;
    }

    static Polynomial variable(int nvars, int var, double coeff = 1.0) {
        Exponents e(static_cast<std::size_t>(nvars), 0);
        e.at(static_cast<std::size_t>(var)) = 1;
        Polynomial p(nvars);
        p.add_term(std::move(e), coeff);
        return p;
    }

    int nvars() const noexcept { return nvars_; }
    const std::map<Exponents, double>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add_term(Exponents powers, double coeff) {
        if (static_cast<int>(powers.size()) != nvars_) {
            throw InvalidArgument("Polynomial: exponent vector has length " + std::to_string(powers.size()) +
                                  ", expected " + std::to_string(nvars_));
        }
        if (std::any_of(powers.begin(), powers.end(), [](int p) { return p < 0; })) {
            throw InvalidArgument("Polynomial: negative exponent");
        }
        if (!std::isfinite(coeff)) throw InvalidArgument("Polynomial: non-finite coefficient");
        if (coeff == 0.0) return;
        auto [it, inserted] = terms_.try_emplace(std::move(powers), coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (int p : e) s += p;
            d = std::max(d, s);
        }
        return d;
    }

    double constant_term() const {
        auto it = terms_.find(Exponents(static_cast<std::size_t>(nvars_), 0));
        return it == terms_.end() ? 0.0 : it->second;
    }

    double max_abs_coeff() const {
        double r = 0.0;
        for (const auto& [e, c] : terms_) r = std::max(r, std::abs(c));
        return r;
    }

    Polynomial derivative(int var) const {
        Polynomial out(nvars_);
        for (const auto& [e, c] : terms_) {
            const int p = e.at(static_cast<std::size_t>(var));
            if (p == 0) continue;
            Exponents lowered = e;
            lowered[static_cast<std::size_t>(var)] = p - 1;
            out.add_term(std::move(lowered), c * p);
        }
        return out;
    }

    double evaluate(std::span<const double> point) const {
        if (static_cast<int>(point.size()) != nvars_) throw InvalidArgument("Polynomial: point dimension mismatch");
        double total = 0.0;
        for (const auto& [e, c] : terms_) {
            double t = c;
            for (std::size_t k = 0; k < e.size(); ++k)
                for (int p = 0; p < e[k]; ++p) t *= point[k];
            total += t;
        }
        return total;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_compatible(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    Polynomial& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_compatible(b);
        Polynomial out(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e = ea;
                for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
                out.add_term(std::move(e), ca * cb);
            }
        return out;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void check_compatible(const Polynomial& o) const {
        if (o.nvars_ != nvars_) throw InvalidArgument("Polynomial: variable count mismatch");
    }

    int nvars_;
    std::map<Exponents, double> terms_;
};

} // namespace kahler
