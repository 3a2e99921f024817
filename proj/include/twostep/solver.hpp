#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twostep/errors.hpp"
#include "twostep/linalg.hpp"
#include "twostep/majorant.hpp"

namespace twostep::solver {

using linalg::DenseMatrix;
using linalg::DenseVector;

struct ProblemDefinition {
    std::size_t dimension = 0;
    std::function<DenseVector(const DenseVector&)> residual;
    std::function<DenseMatrix(const DenseVector&)> jacobian;
    DenseVector x0;
};

/// What a stopping rule sees after iteration k produced `next` from `previous`.
struct StepSummary {
    std::size_t k;
    const DenseVector& previous;
    const DenseVector& next;
    double residual_norm;
};

using StopRule = std::function<bool(const StepSummary&)>;

struct SolveOptions {
    /// ‖x_{k+1} − x_k‖∞ / max(1, ‖x_{k+1}‖∞)
    double step_tolerance = 1e-14;
    /// ‖F(x_{k+1})‖∞
    double residual_tolerance = 1e-12;
    std::size_t max_iterations = 100;
    /// When present, the trace carries the majorant columns.
    std::optional<majorant::ConvergenceCertificate> certificate;
    /// One-step Newton: skip the correction half-step. Benchmark comparisons only.
    bool plain_newton = false;
    /// Replaces the default step-and-residual rule when set.
    StopRule stop_rule;
};

struct IterationRecord {
    std::size_t k = 0;
    double step_y = 0.0;      // ‖y_k − x_k‖∞
    double step_corr = 0.0;   // ‖x_{k+1} − y_k‖∞
    double step_total = 0.0;  // ‖x_{k+1} − x_k‖∞
    double residual = 0.0;    // ‖F(x_{k+1})‖∞
    std::optional<double> s_minus_t;  // s_k − t_k
    std::optional<double> tcorr;      // t_{k+1} − s_k
    std::optional<double> tstep;      // t_{k+1} − t_k
    std::optional<double> t_gap;      // t* − t_k
};

struct IterationTrace {
    std::vector<IterationRecord> rows;
    bool has_majorant = false;

    std::size_t size() const noexcept { return rows.size(); }
    bool empty() const noexcept { return rows.empty(); }
};

struct SolveResult {
    DenseVector solution;
    IterationTrace trace;
    /// x_0, x_1, ..., x_K
    std::vector<DenseVector> iterates;
    std::size_t factorizations = 0;
    std::size_t linear_solves = 0;
};

/// Raised when F'(x_k) fails to factor; carries everything computed before k.
class SingularJacobian : public Error {
public:
    SingularJacobian(std::size_t k, SolveResult partial);
    std::size_t iteration() const noexcept { return k_; }
    const SolveResult& partial() const noexcept { return partial_; }

private:
    std::size_t k_;
    SolveResult partial_;
};

class MaxIterations : public Error {
public:
    explicit MaxIterations(SolveResult partial);
    const SolveResult& partial() const noexcept { return partial_; }

private:
    SolveResult partial_;
};

/// y_k = x_k − F'(x_k)⁻¹F(x_k), x_{k+1} = y_k − F'(x_k)⁻¹F(y_k).
/// F'(x_k) is evaluated and factored once per iteration and reused for both
/// half-steps. Returns immediately with an empty trace if F(x_0) = 0.
SolveResult two_step_newton(const ProblemDefinition& problem, const SolveOptions& options = {});

/// CSV with header k,step_y,step_corr,step_total,residual, followed by
/// s_minus_t,tcorr,tstep,t_gap when the trace carries majorant columns.
std::string to_csv(const IterationTrace& trace);

/// Fills majorant columns of a trace from a certificate's scalar sequence.
void attach_majorant(IterationTrace& trace, const majorant::ConvergenceCertificate& cert);

struct MajorizationRow {
    std::size_t k;
    bool y_step;      // ‖y_k − x_k‖ ≤ s_k − t_k
    bool correction;  // ‖x_{k+1} − y_k‖ ≤ t_{k+1} − s_k
    bool total;       // ‖x_{k+1} − x_k‖ ≤ t_{k+1} − t_k
};

struct MajorizationReport {
    std::vector<MajorizationRow> rows;
    bool all_hold() const noexcept;
};

/// Compares the trace against the certificate's majorizing sequence with
/// slack 1e-12·max(1, t*). Failures are reported, not thrown.
/// Throws CriterionViolated if the certificate's criterion does not hold.
MajorizationReport check_majorization(const IterationTrace& trace,
                                      const majorant::ConvergenceCertificate& cert);

/// Least-squares slope of log e_{k+1} against log e_k.
/// Needs at least three strictly decreasing entries, each above 1e-13;
/// throws InsufficientData otherwise.
double estimate_order(std::span<const double> errors);

}  // namespace twostep::solver
