#pragma once

// Finite thermodynamic networks: A q + B q' = Q with A (stiffness) and B
// (dissipation) symmetric PSD. With B positive definite and (lambda_k, psi_k)
// the B-orthonormal eigenpairs of the pencil,
//
//   (A + theta B)^{-1} = sum_k psi_k psi_k^T / (lambda_k + theta),
//
// which is the Laplace transform of f'. Restricting to the observable
// coordinates gives f(t) = sum_k (1 - e^{-lambda_k t}) psi psi^T / lambda_k
// (plus t psi psi^T for lambda_k = 0). A singular B is handled by
// eliminating ker(B), which contributes an instantaneous compliance.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "viscolevy/errors.hpp"
#include "viscolevy/materials.hpp"
#include "viscolevy/matrix_material.hpp"
#include "viscolevy/numerics.hpp"

namespace viscolevy {

template <typename Scalar>
struct QuadraticFormPair {
    MatrixX<Scalar> A;  ///< stored-energy form W = q^T A q / 2
    MatrixX<Scalar> B;  ///< dissipation form D = q'^T B q' / 2
    std::vector<Eigen::Index> observables;
};

using QuadraticFormPairD = QuadraticFormPair<double>;

template <typename Scalar>
void validate(const QuadraticFormPair<Scalar>& pair) {
    const auto n = pair.A.rows();
    if (n == 0 || pair.A.cols() != n || pair.B.rows() != n || pair.B.cols() != n)
        throw InvalidArgument("A and B must be square matrices of the same size");
    auto check = [](const MatrixX<Scalar>& m, const char* name) {
        const Scalar norm = std::max(Scalar(1), m.cwiseAbs().maxCoeff());
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * norm)
            throw InvalidArgument(std::string(name) + " is not symmetric");
        if (min_symmetric_eigenvalue(m) < Scalar(-1e-10) * norm)
            throw InvalidArgument(std::string(name) + " is not positive semi-definite");
    };
    check(pair.A, "A");
    check(pair.B, "B");
    if (pair.observables.empty()) throw InvalidArgument("at least one observable is required");
    auto sorted = pair.observables;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidArgument("observable indices must be distinct");
    if (sorted.front() < 0 || sorted.back() >= n)
        throw InvalidArgument("observable index out of range");
}

template <typename Scalar>
struct GeneralizedEigen {
    VectorX<Scalar> eigenvalues;  ///< ascending, clamped at 0
    MatrixX<Scalar> vectors;      ///< columns psi_k with psi^T B psi = I
    Scalar condition_number{};    ///< of B
};

/// Solves A psi = lambda B psi by Cholesky congruence. B must be positive
/// definite (DegeneratePencil otherwise; see material_from_quadratic_forms
/// for the deflated path).
template <typename Scalar>
GeneralizedEigen<Scalar> generalized_eigen(const MatrixX<Scalar>& A, const MatrixX<Scalar>& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw InvalidArgument("pencil matrices must be square and of equal size");
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> b_spectrum(B, Eigen::EigenvaluesOnly);
    const Scalar b_min = b_spectrum.eigenvalues().minCoeff();
    const Scalar b_max = b_spectrum.eigenvalues().maxCoeff();
    if (!(b_min > Scalar(1e-14) * std::max(Scalar(1), b_max)) ||
        Eigen::LLT<MatrixX<Scalar>>(B).info() != Eigen::Success)
        throw DegeneratePencil(
            "B is not positive definite; use material_from_quadratic_forms, which deflates ker(B)");

    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixX<Scalar>> solver(
        A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success) throw DegeneratePencil("generalized eigensolver failed");
    GeneralizedEigen<Scalar> out;
    out.eigenvalues = solver.eigenvalues().cwiseMax(Scalar(0));
    out.vectors = solver.eigenvectors();
    out.condition_number = b_max / b_min;
    return out;
}

/// Impulse-response matrix seen at the observables.
template <typename Scalar>
MatrixMaterial<Scalar> material_from_quadratic_forms(const QuadraticFormPair<Scalar>& pair) {
    validate(pair);
    using Matrix = MatrixX<Scalar>;
    const auto n = pair.A.rows();
    const auto m = static_cast<Eigen::Index>(pair.observables.size());
    const Matrix A = (pair.A + pair.A.transpose()) / Scalar(2);
    const Matrix B = (pair.B + pair.B.transpose()) / Scalar(2);

    Eigen::SelfAdjointEigenSolver<Matrix> b_split(B);
    const Scalar b_scale = std::max(Scalar(1e-300), b_split.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<Eigen::Index> range_cols, null_cols;
    for (Eigen::Index k = 0; k < n; ++k)
        (b_split.eigenvalues()(k) > Scalar(1e-12) * b_scale ? range_cols : null_cols).push_back(k);
    const auto r = static_cast<Eigen::Index>(range_cols.size());
    const auto s = static_cast<Eigen::Index>(null_cols.size());
    Matrix U_R(n, r), U_N(n, s);
    for (Eigen::Index j = 0; j < r; ++j) U_R.col(j) = b_split.eigenvectors().col(range_cols[j]);
    for (Eigen::Index j = 0; j < s; ++j) U_N.col(j) = b_split.eigenvectors().col(null_cols[j]);

    // psi columns (full coordinates) and eigenvalues of the reduced pencil
    Matrix psi(n, r);
    VectorX<Scalar> rates(r);
    Matrix constant = Matrix::Zero(n, n);
    if (s == 0) {
        const auto eig = generalized_eigen<Scalar>(A, B);
        psi = eig.vectors;
        rates = eig.eigenvalues;
    } else {
        const Matrix A_NN = U_N.transpose() * A * U_N;
        const Scalar a_scale = std::max(Scalar(1e-300), A.cwiseAbs().maxCoeff());
        Eigen::LDLT<Matrix> a_nn(A_NN);
        if (a_nn.info() != Eigen::Success ||
            min_symmetric_eigenvalue(A_NN) <= Scalar(1e-12) * a_scale)
            throw IrregularPencil("A and B share a null direction; the pencil is not regular");
        const Matrix A_NN_inv = a_nn.solve(Matrix::Identity(s, s));
        constant = U_N * A_NN_inv * U_N.transpose();
        if (r > 0) {
            const Matrix A_NR = U_N.transpose() * A * U_R;
            const Matrix A_RR = U_R.transpose() * A * U_R;
            Matrix schur = A_RR - A_NR.transpose() * A_NN_inv * A_NR;
            schur = ((schur + schur.transpose()) / Scalar(2)).eval();
            const Matrix B_RR = U_R.transpose() * B * U_R;
            const auto eig =
                generalized_eigen<Scalar>(schur, ((B_RR + B_RR.transpose()) / Scalar(2)).eval());
            psi = U_R * eig.vectors - U_N * (A_NN_inv * (A_NR * eig.vectors));
            rates = eig.eigenvalues;
        }
    }

    auto out = MatrixMaterial<Scalar>::zero(m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            out.const_K(i, j) = constant(pair.observables[i], pair.observables[j]);

    const Scalar rate_scale =
        r > 0 ? std::max(rates.maxCoeff(), A.cwiseAbs().maxCoeff() / b_scale) : Scalar(0);
    for (Eigen::Index k = 0; k < r; ++k) {
        VectorX<Scalar> v(m);
        for (Eigen::Index i = 0; i < m; ++i) v(i) = psi(pair.observables[i], k);
        const Matrix vv = v * v.transpose();
        if (rates(k) <= Scalar(1e-12) * rate_scale) {
            out.drift_L += vv;
            continue;
        }
        if (v.squaredNorm() == Scalar(0)) continue;
        const Matrix J = vv / rates(k);
        auto same = std::find_if(out.spectral_atoms.begin(), out.spectral_atoms.end(),
                                 [&](const SpectralAtom<Scalar>& a) {
                                     using std::abs;
                                     return abs(a.rate - rates(k)) <= Scalar(1e-12) * rates(k);
                                 });
        if (same != out.spectral_atoms.end())
            same->J += J;
        else
            out.spectral_atoms.push_back({rates(k), J});
    }
    std::sort(out.spectral_atoms.begin(), out.spectral_atoms.end(),
              [](const auto& a, const auto& b) { return a.rate < b.rate; });
    return out;
}

struct EvolutionOptions {
    /// Fastest relaxation time 1/lambda_max below this is rejected.
    double min_resolvable_time = 1e-12;
};

/// Integrates A q + B q' = Q (implicit Euler, step = grid.step, q(0) = 0)
/// with loads[j] applied at observable j, and returns the largest deviation
/// of the observable trajectory from respond_creep(material, loads, grid).
double verify_evolution(const QuadraticFormPairD& pair, const MatrixMaterialD& material,
                        std::span<const LoadHistory> loads, const TimeGrid& grid,
                        const EvolutionOptions& options = {});

}  // namespace viscolevy
