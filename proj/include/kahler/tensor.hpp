#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kahler/error.hpp"

namespace kahler {

/// Real vector space R^m, m = 2*m_bar, with the standard complex structure.
///
/// Basis order is fixed everywhere: (e_1..e_mbar, f_1..f_mbar) with
/// e_i = d/dx_i and f_i = d/dy_i = J e_i. The basis is orthonormal, so
/// raising and lowering indices is the identity on components.
class SpaceConfig {
public:
    explicit SpaceConfig(int m_bar) : m_bar_(m_bar) {
        if (m_bar < 1) {
            throw InvalidArgument("m_bar must be >= 1, got " + std::to_string(m_bar));
        }
    }

    int m_bar() const noexcept { return m_bar_; }
    int m() const noexcept { return 2 * m_bar_; }

    // 0-based complex index i -> basis slot of e_{i+1} / f_{i+1}
    int e(int i) const noexcept { return i; }
    int f(int i) const noexcept { return m_bar_ + i; }
    bool is_e(int a) const noexcept { return a < m_bar_; }
    int complex_index(int a) const noexcept { return is_e(a) ? a : a - m_bar_; }

    // J v_a = j_sign(a) * v_{j_index(a)}
    int j_index(int a) const noexcept { return is_e(a) ? a + m_bar_ : a - m_bar_; }
    double j_sign(int a) const noexcept { return is_e(a) ? 1.0 : -1.0; }

    std::string basis_name(int a) const {
        return (is_e(a) ? "e" : "f") + std::to_string(complex_index(a) + 1);
    }

    void require_decomposable() const {
        if (m_bar_ < 2) {
            throw InvalidArgument("module decomposition requires m_bar >= 2, got " +
                                  std::to_string(m_bar_));
        }
    }

    friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;

private:
    int m_bar_;
};

namespace detail {

inline void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgument(std::string(what) + " has a non-finite entry");
        }
    }
}

} // namespace detail

/// Dense real tensor of rank 2 on R^m. Entry (a, b) is theta(v_a, v_b).
class Bilinear2 {
public:
    explicit Bilinear2(SpaceConfig config)
        : config_(config), data_(static_cast<std::size_t>(config.m() * config.m()), 0.0) {}

    Bilinear2(SpaceConfig config, std::vector<double> entries)
        : config_(config), data_(std::move(entries)) {
        const auto m = static_cast<std::size_t>(config.m());
        if (data_.size() != m * m) {
            throw InvalidArgument("Bilinear2 needs m^2 entries");
        }
        detail::require_finite(data_, "Bilinear2");
    }

    static Bilinear2 identity(SpaceConfig config) {
        Bilinear2 g(config);
        for (int a = 0; a < config.m(); ++a) g(a, a) = 1.0;
        return g;
    }

    const SpaceConfig& config() const noexcept { return config_; }
    int dim() const noexcept { return config_.m(); }

    double& operator()(int a, int b) { return data_[index(a, b)]; }
    double operator()(int a, int b) const { return data_[index(a, b)]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Bilinear2 transpose() const {
        Bilinear2 t(config_);
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b) t(a, b) = (*this)(b, a);
        return t;
    }

    /// (J^* theta)(x, y) = theta(Jx, Jy)
    Bilinear2 j_pullback() const {
        Bilinear2 t(config_);
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b)
                t(a, b) = config_.j_sign(a) * config_.j_sign(b) *
                          (*this)(config_.j_index(a), config_.j_index(b));
        return t;
    }

    double dot(const Bilinear2& other) const {
        double s = 0.0;
        for (std::size_t n = 0; n < data_.size(); ++n) s += data_[n] * other.data_[n];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double max_abs() const {
        double r = 0.0;
        for (double v : data_) r = std::max(r, std::abs(v));
        return r;
    }

    Bilinear2& operator+=(const Bilinear2& o) {
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
        return *this;
    }
    Bilinear2& operator-=(const Bilinear2& o) {
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
        return *this;
    }
    Bilinear2& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend Bilinear2 operator+(Bilinear2 a, const Bilinear2& b) { return a += b; }
    friend Bilinear2 operator-(Bilinear2 a, const Bilinear2& b) { return a -= b; }
    friend Bilinear2 operator*(double s, Bilinear2 a) { return a *= s; }
    friend bool operator==(const Bilinear2& a, const Bilinear2& b) {
        return a.config_ == b.config_ && a.data_ == b.data_;
    }

private:
    std::size_t index(int a, int b) const noexcept {
        return static_cast<std::size_t>(a * dim() + b);
    }

    SpaceConfig config_;
    std::vector<double> data_;
};

/// Matrix of the standard complex structure: J e_i = f_i, J f_i = -e_i.
/// Entry (r, c) is the r-th component of J v_c.
inline Bilinear2 standard_complex_structure(SpaceConfig config) {
    Bilinear2 j(config);
    for (int c = 0; c < config.m(); ++c) j(config.j_index(c), c) = config.j_sign(c);
    return j;
}

/// Kaehler form Omega(x, y) = <x, J y>. In the orthonormal basis this is the
/// matrix of J itself.
inline Bilinear2 kahler_form(SpaceConfig config) { return standard_complex_structure(config); }

/// Dense rank-4 tensor on R^m; entry (a, b, c, d) is A(v_a, v_b, v_c, v_d).
///
/// Storage is row-major with flat index ((a*m + b)*m + c)*m + d, which is
/// also the on-disk order.
class Tensor4 {
public:
    explicit Tensor4(SpaceConfig config) : config_(config), data_(size_for(config), 0.0) {}

    Tensor4(SpaceConfig config, std::vector<double> entries)
        : config_(config), data_(std::move(entries)) {
        if (data_.size() != size_for(config)) {
            throw InvalidArgument("Tensor4 needs m^4 = " + std::to_string(size_for(config)) +
                                  " entries, got " + std::to_string(data_.size()));
        }
        detail::require_finite(data_, "Tensor4");
    }

    static std::size_t size_for(SpaceConfig config) {
        const auto m = static_cast<std::size_t>(config.m());
        return m * m * m * m;
    }

    const SpaceConfig& config() const noexcept { return config_; }
    int dim() const noexcept { return config_.m(); }
    std::size_t size() const noexcept { return data_.size(); }

    double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
    double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

    std::size_t index(int a, int b, int c, int d) const noexcept {
        const int m = dim();
        return static_cast<std::size_t>(((a * m + b) * m + c) * m + d);
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    double dot(const Tensor4& other) const {
        double s = 0.0;
        for (std::size_t n = 0; n < data_.size(); ++n) s += data_[n] * other.data_[n];
        return s;
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double max_abs() const {
        double r = 0.0;
        for (double v : data_) r = std::max(r, std::abs(v));
        return r;
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
    }

    Tensor4& operator+=(const Tensor4& o) {
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
        return *this;
    }
    Tensor4& operator-=(const Tensor4& o) {
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
        return *this;
    }
    Tensor4& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
    friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
    friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }
    friend bool operator==(const Tensor4& a, const Tensor4& b) {
        return a.config_ == b.config_ && a.data_ == b.data_;
    }

    /// Relabel the basis by a permutation of complex indices (e_i -> e_p(i),
    /// f_i -> f_p(i)); the result B satisfies B(v_p(a), ...) = A(v_a, ...).
    Tensor4 relabeled(std::span<const int> complex_perm) const {
        const int mb = config_.m_bar();
        auto slot = [&](int a) {
            const int i = complex_perm[static_cast<std::size_t>(config_.complex_index(a))];
            return config_.is_e(a) ? i : mb + i;
        };
        Tensor4 out(config_);
        const int m = dim();
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d)
                        out(slot(a), slot(b), slot(c), slot(d)) = (*this)(a, b, c, d);
        return out;
    }

private:
    SpaceConfig config_;
    std::vector<double> data_;
};

} // namespace kahler
