#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kahler/error.hpp"
#include "kahler/tensor.hpp"

namespace kahler {

using FlatVector = Eigen::VectorXd;
using LinearMapMatrix = Eigen::MatrixXd;

inline constexpr double kOrthonormalTolerance = 1e-12;

inline FlatVector flatten(const Tensor4& t) {
    return Eigen::Map<const FlatVector>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

inline FlatVector flatten(const Bilinear2& b) {
    return Eigen::Map<const FlatVector>(b.data().data(), static_cast<Eigen::Index>(b.data().size()));
}

inline Tensor4 unflatten_tensor(SpaceConfig config, const FlatVector& v) {
    return Tensor4(config, std::vector<double>(v.data(), v.data() + v.size()));
}

inline Bilinear2 unflatten_bilinear(SpaceConfig config, const FlatVector& v) {
    return Bilinear2(config, std::vector<double>(v.data(), v.data() + v.size()));
}

/// A linear subspace of R^N given by an orthonormal basis (stored as columns).
class Subspace {
public:
    explicit Subspace(Eigen::Index ambient_dim) : basis_(ambient_dim, 0) {}

    /// Takes ownership of columns that are already orthonormal.
    static Subspace from_orthonormal(Eigen::MatrixXd columns) {
        Subspace s(columns.rows());
        s.basis_ = std::move(columns);
        return s;
    }

    static Subspace whole(Eigen::Index ambient_dim) {
        return from_orthonormal(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim));
    }

    Eigen::Index ambient_dim() const noexcept { return basis_.rows(); }
    Eigen::Index dim() const noexcept { return basis_.cols(); }
    const Eigen::MatrixXd& basis() const noexcept { return basis_; }
    FlatVector vector(Eigen::Index k) const { return basis_.col(k); }

    FlatVector coordinates(const FlatVector& v) const { return basis_.transpose() * v; }
    FlatVector project(const FlatVector& v) const { return basis_ * (basis_.transpose() * v); }

    /// Largest deviation of the Gram matrix from the identity.
    double orthonormality_defect() const {
        if (dim() == 0) return 0.0;
        const Eigen::MatrixXd gram = basis_.transpose() * basis_;
        return (gram - Eigen::MatrixXd::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    }

    /// max over basis vectors b of other of |b - P_this b|
    double containment_residual(const Subspace& other) const {
        double worst = 0.0;
        for (Eigen::Index k = 0; k < other.dim(); ++k) {
            const FlatVector b = other.basis_.col(k);
            worst = std::max(worst, (b - project(b)).norm());
        }
        return worst;
    }

private:
    Eigen::MatrixXd basis_;
};

/// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
/// residual norm after projection falls below `tol` are dropped.
inline Subspace orthonormalize(std::span<const FlatVector> vectors, double tol = 1e-10,
                               std::optional<Eigen::Index> ambient = std::nullopt) {
    const Eigen::Index n = ambient ? *ambient : (vectors.empty() ? 0 : vectors.front().size());
    std::vector<FlatVector> kept;
    for (const FlatVector& v : vectors) {
        if (v.size() != n) throw InvalidArgument("orthonormalize: ambient dimension mismatch");
        FlatVector w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const FlatVector& q : kept) w -= q.dot(w) * q;
        const double r = w.norm();
        if (r >= tol) kept.push_back(w / r);
    }
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = kept[k];
    return Subspace::from_orthonormal(std::move(basis));
}

inline Subspace orthonormalize_columns(const Eigen::MatrixXd& columns, double tol = 1e-10) {
    std::vector<FlatVector> vs;
    vs.reserve(static_cast<std::size_t>(columns.cols()));
    for (Eigen::Index k = 0; k < columns.cols(); ++k) vs.emplace_back(columns.col(k));
    return orthonormalize(vs, tol, columns.rows());
}

/// Default relative rank threshold: max(M, K) * machine epsilon.
inline double default_rank_threshold(const LinearMapMatrix& map) {
    return static_cast<double>(std::max(map.rows(), map.cols())) *
           std::numeric_limits<double>::epsilon();
}

/// Singular values of `map` in decreasing order.
inline Eigen::VectorXd singular_values(const LinearMapMatrix& map) {
    if (map.size() == 0) return Eigen::VectorXd(0);
    if (map.cwiseAbs().maxCoeff() == 0.0) return Eigen::VectorXd::Zero(std::min(map.rows(), map.cols()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map);
    return svd.singularValues();
}

/// Numerical rank: singular values above rel_tol * sigma_max.
inline Eigen::Index numerical_rank(const LinearMapMatrix& map, std::optional<double> rel_tol = std::nullopt) {
    const Eigen::VectorXd sv = singular_values(map);
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double cut = rel_tol.value_or(default_rank_threshold(map)) * sv(0);
    return static_cast<Eigen::Index>((sv.array() > cut).count());
}

/// Orthonormal basis of ker(map). Singular values at or below
/// rel_tol * sigma_max count as zero.
inline Subspace nullspace(const LinearMapMatrix& map, std::optional<double> rel_tol = std::nullopt) {
    const Eigen::Index k = map.cols();
    if (map.rows() == 0 || k == 0 || map.cwiseAbs().maxCoeff() == 0.0) return Subspace::whole(k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = rel_tol.value_or(default_rank_threshold(map)) * (sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    if (sv.size() && sv(0) > 0.0) rank = static_cast<Eigen::Index>((sv.array() > cut).count());
    return Subspace::from_orthonormal(svd.matrixV().rightCols(k - rank));
}

/// Matrix of a linear function restricted to a subspace: column k is f(b_k).
inline LinearMapMatrix restricted_map(const Subspace& sub,
                                      const std::function<FlatVector(const FlatVector&)>& f,
                                      Eigen::Index out_dim) {
    LinearMapMatrix out(out_dim, sub.dim());
    for (Eigen::Index k = 0; k < sub.dim(); ++k) out.col(k) = f(sub.basis().col(k));
    return out;
}

/// {v in sub : f(v) = 0}
inline Subspace kernel_within(const Subspace& sub, const std::function<FlatVector(const FlatVector&)>& f,
                              Eigen::Index out_dim, std::optional<double> rel_tol = std::nullopt) {
    if (sub.dim() == 0) return sub;
    const Subspace coeffs = nullspace(restricted_map(sub, f, out_dim), rel_tol);
    return Subspace::from_orthonormal(sub.basis() * coeffs.basis());
}

/// Orthogonal complement of `sub` inside `ambient`.
inline Subspace complement_within(const Subspace& sub, const Subspace& ambient, double tol = 1e-9) {
    if (sub.ambient_dim() != ambient.ambient_dim()) {
        throw InvalidArgument("complement_within: ambient dimension mismatch");
    }
    const double leak = ambient.containment_residual(sub);
    if (leak > tol) {
        throw InvalidArgument("complement_within: subspace is not contained in ambient (residual " +
                              std::to_string(leak) + ")");
    }
    if (sub.dim() == 0) return ambient;
    const LinearMapMatrix overlap = sub.basis().transpose() * ambient.basis();
    const Subspace coeffs = nullspace(overlap);
    Subspace out = Subspace::from_orthonormal(ambient.basis() * coeffs.basis());
    if (out.dim() + sub.dim() != ambient.dim()) {
        throw InternalError("complement_within: dimension count mismatch (" + std::to_string(out.dim()) +
                            " + " + std::to_string(sub.dim()) + " != " + std::to_string(ambient.dim()) + ")");
    }
    return out;
}

/// Span of the union of two subspaces.
inline Subspace span_union(const Subspace& a, const Subspace& b, double tol = 1e-10) {
    Eigen::MatrixXd cols(a.ambient_dim(), a.dim() + b.dim());
    cols << a.basis(), b.basis();
    return orthonormalize_columns(cols, tol);
}

struct LeastSquaresSolution {
    FlatVector coeffs;
    double residual = 0.0;
};

/// Minimum-norm least-squares solver for a fixed matrix; factor once, solve many.
class LeastSquaresSolver {
public:
    explicit LeastSquaresSolver(LinearMapMatrix map, std::optional<double> rel_tol = std::nullopt)
        : map_(std::move(map)) {
        if (map_.size() == 0 || map_.cwiseAbs().maxCoeff() == 0.0) return;
        svd_.compute(map_, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd_.setThreshold(rel_tol.value_or(default_rank_threshold(map_)));
    }

    const LinearMapMatrix& matrix() const noexcept { return map_; }
    Eigen::Index rank() const { return factored() ? svd_.rank() : 0; }

    LeastSquaresSolution solve(const FlatVector& target) const {
        if (target.size() != map_.rows()) throw InvalidArgument("least_squares_solve: dimension mismatch");
        LeastSquaresSolution out;
        if (!factored()) {
            out.coeffs = FlatVector::Zero(map_.cols());
        } else {
            out.coeffs = svd_.solve(target);
        }
        out.residual = (map_ * out.coeffs - target).norm();
        return out;
    }

private:
    bool factored() const { return svd_.singularValues().size() > 0 && svd_.singularValues()(0) > 0.0; }

    LinearMapMatrix map_;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_;
};

inline LeastSquaresSolution least_squares_solve(const LinearMapMatrix& map, const FlatVector& target) {
    return LeastSquaresSolver(map).solve(target);
}

} // namespace kahler
