#pragma once

// Minimal positive solution of the transport-theory Riccati equation
//
//   XCX − XD − AX + B = 0,
//   A = Δ − e·qᵀ,  B = e·eᵀ,  C = q·qᵀ,  D = Γ − q·eᵀ,
//
// through its vector form X = T ∘ (u·vᵀ), T_ij = 1/(δ_i + γ_j), where (u, v)
// solves
//
//   u = u ∘ (P·v) + e,   v = v ∘ (P̃·u) + e,
//   P_ij = q_j/(δ_i + γ_j),   P̃_ij = q_j/(γ_i + δ_j).

#include <cstddef>
#include <utility>
#include <vector>

#include "twostep/errors.hpp"
#include "twostep/linalg.hpp"
#include "twostep/majorant.hpp"
#include "twostep/quadrature.hpp"
#include "twostep/solver.hpp"

namespace twostep::riccati {

using linalg::DenseMatrix;
using linalg::DenseVector;

struct TransportParameters {
    double alpha = 0.0;  // [0, 1)
    double c = 1.0;      // (0, 1]
    std::size_t n = 4;   // multiple of 4

    /// Throws InvalidArgument for α or c out of range, InvalidSize for n.
    void validate() const;
};

struct RiccatiData {
    TransportParameters params;
    quadrature::QuadratureRule rule;
    DenseVector delta;  // 1/(c·ω_i·(1+α))
    DenseVector gamma;  // 1/(c·ω_i·(1−α))
    DenseVector q;      // c_i/(2ω_i)
    DenseMatrix P;
    DenseMatrix P_tilde;
    DenseMatrix T;

    std::size_t n() const noexcept { return params.n; }
};

RiccatiData build_data(const TransportParameters& params);

/// The residual (u − u∘(Pv) − e ; v − v∘(P̃u) − e) as one 2n-vector.
DenseVector f_eval(const RiccatiData& d, const DenseVector& u, const DenseVector& v);

/// f'(u,v) = I₂ₙ − [[G1, H1], [H2, G2]] with G1 = diag(Pv), G2 = diag(P̃u),
/// H1 = diag(u)·P, H2 = diag(v)·P̃. The diagonal blocks are kept as vectors.
struct JacobianBlocks {
    DenseVector G1;
    DenseVector G2;
    DenseMatrix H1;
    DenseMatrix H2;
};

JacobianBlocks jacobian_blocks(const RiccatiData& d, const DenseVector& u, const DenseVector& v);

/// Assembled 2n×2n f'(u,v). Only meant for the monolithic cross-check.
DenseMatrix jacobian_matrix(const RiccatiData& d, const DenseVector& u, const DenseVector& v);

/// f as a generic problem over w = (u; v), starting from w = 0.
solver::ProblemDefinition as_problem(const RiccatiData& d);

/// max(‖u⁺ − u‖∞/‖u⁺‖∞, ‖v⁺ − v‖∞/‖v⁺‖∞); a zero denominator falls back to
/// the absolute step norm.
double res_metric(const DenseVector& u, const DenseVector& u_next, const DenseVector& v,
                  const DenseVector& v_next);

/// (√n/2)·2⁻⁵²
double stopping_threshold(std::size_t n);

inline constexpr std::size_t kMaxOuterIterations = 100;

struct RiccatiOptions {
    std::size_t max_iterations = kMaxOuterIterations;
    /// One-step Newton on the same eliminated system, for comparison runs.
    bool plain_newton = false;
    /// Keep (u_k, v_k) for every k, including k = 0.
    bool keep_iterates = false;
};

struct MinimalSolution {
    DenseVector u;
    DenseVector v;
    DenseMatrix X;
    std::size_t iterations = 0;
    std::vector<double> res_history;
    double riccati_residual = 0.0;
    /// Wall time of the iteration loop only.
    double solve_seconds = 0.0;
    std::vector<std::pair<DenseVector, DenseVector>> iterates;
};

class SingularSchur : public Error {
public:
    explicit SingularSchur(std::size_t k);
    std::size_t iteration() const noexcept { return k_; }

private:
    std::size_t k_;
};

class MaxIterations : public Error {
public:
    explicit MaxIterations(std::vector<double> res_history);
    const std::vector<double>& res_history() const noexcept { return res_history_; }

private:
    std::vector<double> res_history_;
};

/// Block-eliminated two-step Newton from (u, v) = (0, 0). Each outer iteration
/// factors the Schur complement S = I − G2 − H2(I − G1)⁻¹H1 once and uses it
/// for both half-steps. Stops when res_metric ≤ stopping_threshold(n).
MinimalSolution solve_minimal(const RiccatiData& d, const RiccatiOptions& opts = {});
MinimalSolution solve_minimal(const TransportParameters& params, const RiccatiOptions& opts = {});

/// X_ij = u_i·v_j/(δ_i + γ_j)
DenseMatrix assemble_X(const RiccatiData& d, const DenseVector& u, const DenseVector& v);

struct Coefficients {
    DenseMatrix A;
    DenseMatrix B;
    DenseMatrix C;
    DenseMatrix D;
};

/// Dense A, B, C, D. The solve never needs these; verification code does.
Coefficients coefficient_matrices(const RiccatiData& d);

/// ‖XCX − XD − AX + B‖∞, using the rank-one structure of B, C and the
/// diagonal-plus-rank-one structure of A, D (O(n²)).
double ricc_residual(const RiccatiData& d, const DenseMatrix& X);

/// Constant-L certificate with L = c(1+α) and β = ‖f'(0)⁻¹f(0)‖∞ = 1.
majorant::ConvergenceCertificate instance_certificate(const TransportParameters& params);

}  // namespace twostep::riccati
