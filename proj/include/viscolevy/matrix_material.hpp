#pragma once

// m x m impulse-response matrices
//
//   f(t) = sum_k (1 - exp(-lambda_k t)) J_k + t L + K
//
// with J_k, L, K symmetric positive semi-definite.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "viscolevy/bernstein.hpp"
#include "viscolevy/errors.hpp"

namespace viscolevy {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SpectralAtom {
    Scalar rate{};
    MatrixX<Scalar> J;
};

template <typename Scalar>
struct MatrixMaterial {
    Eigen::Index dim = 0;
    std::vector<SpectralAtom<Scalar>> spectral_atoms;
    MatrixX<Scalar> drift_L;
    MatrixX<Scalar> const_K;

    static MatrixMaterial zero(Eigen::Index m) {
        MatrixMaterial out;
        out.dim = m;
        out.drift_L = MatrixX<Scalar>::Zero(m, m);
        out.const_K = MatrixX<Scalar>::Zero(m, m);
        return out;
    }
};

using MatrixMaterialD = MatrixMaterial<double>;

/// Smallest eigenvalue of the symmetric part.
template <typename Derived>
typename Derived::Scalar min_symmetric_eigenvalue(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    if (a.rows() == 0) return Scalar(0);
    MatrixX<Scalar> sym = (a + a.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// True when `a` is symmetric to `tol * max(1, |a|)` and its eigenvalues are
/// >= -tol * max(1, |a|).
template <typename Derived>
bool is_symmetric_psd(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar tol) {
    using Scalar = typename Derived::Scalar;
    if (a.rows() != a.cols()) return false;
    const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol * scale) return false;
    return min_symmetric_eigenvalue(a) >= -tol * scale;
}

/// Throws InvalidArgument unless every block is m x m symmetric PSD and
/// every rate is positive.
template <typename Scalar>
void validate(const MatrixMaterial<Scalar>& material, Scalar tol = Scalar(1e-10)) {
    const auto m = material.dim;
    auto check = [&](const MatrixX<Scalar>& block, const std::string& what) {
        if (block.rows() != m || block.cols() != m)
            throw InvalidArgument(what + " has the wrong shape");
        if (!is_symmetric_psd(block, tol)) throw InvalidArgument(what + " is not symmetric PSD");
    };
    check(material.drift_L, "drift matrix");
    check(material.const_K, "constant matrix");
    for (const auto& atom : material.spectral_atoms) {
        if (!(atom.rate > Scalar(0))) throw InvalidArgument("spectral rate must be > 0");
        check(atom.J, "spectral atom matrix");
    }
}

template <typename Scalar>
MatrixX<Scalar> eval_impulse(const MatrixMaterial<Scalar>& material, Scalar t) {
    using std::expm1;
    MatrixX<Scalar> f = material.const_K + t * material.drift_L;
    for (const auto& atom : material.spectral_atoms) f += -expm1(-atom.rate * t) * atom.J;
    return f;
}

template <typename Scalar>
MatrixX<Scalar> eval_derivative(const MatrixMaterial<Scalar>& material, Scalar t) {
    using std::exp;
    MatrixX<Scalar> d = material.drift_L;
    for (const auto& atom : material.spectral_atoms) d += atom.rate * exp(-atom.rate * t) * atom.J;
    return d;
}

/// Laplace transform of f': K + L / theta + sum_k J_k lambda_k / (theta + lambda_k).
template <typename Scalar, typename Z>
MatrixX<Z> laplace_fprime(const MatrixMaterial<Scalar>& material, Z theta) {
    MatrixX<Z> h = material.const_K.template cast<Z>() + material.drift_L.template cast<Z>() / theta;
    for (const auto& atom : material.spectral_atoms)
        h += (Z(atom.rate) / (theta + Z(atom.rate))) * atom.J.template cast<Z>();
    return h;
}

/// The 1 x 1 case as a scalar Bernstein representation.
template <typename Scalar>
BernsteinRep scalar_reduction(const MatrixMaterial<Scalar>& material) {
    if (material.dim != 1) throw InvalidArgument("scalar reduction needs a 1 x 1 material");
    BernsteinRep rep;
    rep.constant_L = static_cast<double>(material.const_K(0, 0));
    rep.drift_K = static_cast<double>(material.drift_L(0, 0));
    for (const auto& atom : material.spectral_atoms)
        rep.levy.atoms.push_back({static_cast<double>(atom.rate), static_cast<double>(atom.J(0, 0))});
    return canonicalize(std::move(rep));
}

/// Embeds a scalar atoms-only material as a 1 x 1 matrix material.
MatrixMaterialD as_matrix_material(const BernsteinRep& rep);

}  // namespace viscolevy
