#include "twostep/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace twostep::solver {

using linalg::inf_norm;

SingularJacobian::SingularJacobian(std::size_t k, SolveResult partial)
    : Error("singular Jacobian at iteration " + std::to_string(k)), k_(k),
      partial_(std::move(partial)) {}

MaxIterations::MaxIterations(SolveResult partial)
    : Error("two-step Newton did not converge within " +
            std::to_string(partial.trace.size()) + " iterations"),
      partial_(std::move(partial)) {}

namespace {

bool default_stop(const SolveOptions& opts, const StepSummary& step) {
    const double size = std::max(1.0, inf_norm(step.next));
    return inf_norm(step.next - step.previous) / size <= opts.step_tolerance &&
           step.residual_norm <= opts.residual_tolerance;
}

}  // namespace

SolveResult two_step_newton(const ProblemDefinition& problem, const SolveOptions& options) {
    if (!problem.residual || !problem.jacobian) {
        throw InvalidArgument("problem needs both a residual and a Jacobian evaluator");
    }
    if (problem.x0.size() != problem.dimension) {
        throw DimensionMismatch("initial point has size " + std::to_string(problem.x0.size()) +
                                ", problem dimension is " + std::to_string(problem.dimension));
    }

    SolveResult result;
    DenseVector x = problem.x0;
    DenseVector fx = problem.residual(x);
    result.iterates.push_back(x);

    const auto finish = [&] {
        result.solution = x;
        if (options.certificate) attach_majorant(result.trace, *options.certificate);
    };

    if (inf_norm(fx) == 0.0) {
        finish();
        return result;
    }

    for (std::size_t k = 0; k < options.max_iterations; ++k) {
        linalg::LuFactorization lu;
        try {
            lu = linalg::lu_factor(problem.jacobian(x));
        } catch (const SingularMatrix&) {
            finish();
            throw SingularJacobian(k, std::move(result));
        }
        ++result.factorizations;

        const DenseVector y = x - linalg::lu_solve(lu, fx);
        ++result.linear_solves;

        DenseVector next = y;
        if (!options.plain_newton) {
            next = y - linalg::lu_solve(lu, problem.residual(y));
            ++result.linear_solves;
        }
        DenseVector f_next = problem.residual(next);

        IterationRecord row;
        row.k = k;
        row.step_y = inf_norm(y - x);
        row.step_corr = inf_norm(next - y);
        row.step_total = inf_norm(next - x);
        row.residual = inf_norm(f_next);
        result.trace.rows.push_back(row);
        result.iterates.push_back(next);

        const StepSummary summary{k, x, next, row.residual};
        const bool stop =
            options.stop_rule ? options.stop_rule(summary) : default_stop(options, summary);
        x = std::move(next);
        fx = std::move(f_next);
        if (stop) {
            finish();
            return result;
        }
    }
    finish();
    throw MaxIterations(std::move(result));
}

std::string to_csv(const IterationTrace& trace) {
    std::string out = "k,step_y,step_corr,step_total,residual";
    if (trace.has_majorant) out += ",s_minus_t,tcorr,tstep,t_gap";
    out += '\n';
    char buf[32];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.16e", v);
        out += buf;
    };
    for (const auto& r : trace.rows) {
        out += std::to_string(r.k);
        put(r.step_y);
        put(r.step_corr);
        put(r.step_total);
        put(r.residual);
        if (trace.has_majorant) {
            put(r.s_minus_t.value_or(0.0));
            put(r.tcorr.value_or(0.0));
            put(r.tstep.value_or(0.0));
            put(r.t_gap.value_or(0.0));
        }
        out += '\n';
    }
    return out;
}

void attach_majorant(IterationTrace& trace, const majorant::ConvergenceCertificate& cert) {
    if (!cert.criterion_holds || !cert.t_star) {
        throw CriterionViolated("majorant columns need a certificate with 0 < beta <= b");
    }
    const auto seq = majorant::majorizing_sequence(cert, std::max<std::size_t>(trace.size(), 1));
    const double t_star = *cert.t_star;
    for (auto& row : trace.rows) {
        const double t = seq.t(std::min(row.k, seq.size()));
        const double s = row.k < seq.size() ? seq.steps[row.k].s : seq.limit;
        const double t_next = seq.t(std::min(row.k + 1, seq.size()));
        row.s_minus_t = s - t;
        row.tcorr = t_next - s;
        row.tstep = t_next - t;
        row.t_gap = t_star - t;
    }
    trace.has_majorant = true;
}

bool MajorizationReport::all_hold() const noexcept {
    return std::all_of(rows.begin(), rows.end(),
                       [](const MajorizationRow& r) { return r.y_step && r.correction && r.total; });
}

MajorizationReport check_majorization(const IterationTrace& trace,
                                      const majorant::ConvergenceCertificate& cert) {
    MajorizationReport report;
    if (trace.empty()) return report;

    IterationTrace with_majorant = trace;
    attach_majorant(with_majorant, cert);
    const double slack = 1e-12 * std::max(1.0, *cert.t_star);
    for (const auto& row : with_majorant.rows) {
        report.rows.push_back({row.k, row.step_y <= *row.s_minus_t + slack,
                               row.step_corr <= *row.tcorr + slack,
                               row.step_total <= *row.tstep + slack});
    }
    return report;
}

double estimate_order(std::span<const double> errors) {
    if (errors.size() < 3) {
        throw InsufficientData("order estimation needs at least three errors, got " +
                               std::to_string(errors.size()));
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 1e-13) || !std::isfinite(errors[i])) {
            throw InsufficientData("errors must be finite and above 1e-13");
        }
        if (i > 0 && !(errors[i] < errors[i - 1])) {
            throw InsufficientData("errors must be strictly decreasing");
        }
    }
    // log10 keeps exact powers of ten exact, so e_{k+1} = e_k^p gives p exactly.
    const std::size_t m = errors.size() - 1;
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_x += std::log10(errors[i]);
        mean_y += std::log10(errors[i + 1]);
    }
    mean_x /= static_cast<double>(m);
    mean_y /= static_cast<double>(m);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = std::log10(errors[i]) - mean_x;
        sxy += dx * (std::log10(errors[i + 1]) - mean_y);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace twostep::solver
