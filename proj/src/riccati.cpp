#include "twostep/riccati.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace twostep::riccati {

using linalg::inf_norm;

namespace {

void require_size(const RiccatiData& d, const DenseVector& x, const char* what) {
    if (x.size() != d.n()) {
        throw DimensionMismatch(std::string(what) + " has size " + std::to_string(x.size()) +
                                ", expected " + std::to_string(d.n()));
    }
}

DenseVector ones(std::size_t n) { return DenseVector::ones(n); }

// x ∘ y + z, elementwise
DenseVector fma(const DenseVector& x, const DenseVector& y, const DenseVector& z) {
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i] + z[i];
    return out;
}

DenseVector divide(const DenseVector& x, const DenseVector& y) {
    DenseVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] / y[i];
    return out;
}

}  // namespace

void TransportParameters::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in [0, 1), got " + std::to_string(alpha));
    }
    if (!(c > 0.0 && c <= 1.0)) {
        throw InvalidArgument("c must lie in (0, 1], got " + std::to_string(c));
    }
    if (n < 4 || n % 4 != 0) {
        throw InvalidSize("n must be a positive multiple of 4, got " + std::to_string(n));
    }
}

RiccatiData build_data(const TransportParameters& params) {
    params.validate();
    RiccatiData d;
    d.params = params;
    d.rule = quadrature::composite_gl4(params.n);

    const std::size_t n = params.n;
    const double alpha = params.alpha;
    const double c = params.c;
    d.delta = DenseVector(n);
    d.gamma = DenseVector(n);
    d.q = DenseVector(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = d.rule.nodes[i];
        d.delta[i] = 1.0 / (c * w * (1.0 + alpha));
        d.gamma[i] = 1.0 / (c * w * (1.0 - alpha));
        d.q[i] = d.rule.weights[i] / (2.0 * w);
    }

    d.P = DenseMatrix(n, n);
    d.P_tilde = DenseMatrix(n, n);
    d.T = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            d.T(i, j) = 1.0 / (d.delta[i] + d.gamma[j]);
            d.P(i, j) = d.q[j] / (d.delta[i] + d.gamma[j]);
            d.P_tilde(i, j) = d.q[j] / (d.gamma[i] + d.delta[j]);
        }
    }
    return d;
}

DenseVector f_eval(const RiccatiData& d, const DenseVector& u, const DenseVector& v) {
    require_size(d, u, "u");
    require_size(d, v, "v");
    const std::size_t n = d.n();
    const DenseVector pv = d.P * v;
    const DenseVector ptu = d.P_tilde * u;
    DenseVector out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = u[i] - u[i] * pv[i] - 1.0;
        out[n + i] = v[i] - v[i] * ptu[i] - 1.0;
    }
    return out;
}

JacobianBlocks jacobian_blocks(const RiccatiData& d, const DenseVector& u, const DenseVector& v) {
    require_size(d, u, "u");
    require_size(d, v, "v");
    const std::size_t n = d.n();
    JacobianBlocks blocks{d.P * v, d.P_tilde * u, DenseMatrix(n, n), DenseMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            blocks.H1(i, j) = u[i] * d.P(i, j);
            blocks.H2(i, j) = v[i] * d.P_tilde(i, j);
        }
    }
    return blocks;
}

DenseMatrix jacobian_matrix(const RiccatiData& d, const DenseVector& u, const DenseVector& v) {
    const JacobianBlocks g = jacobian_blocks(d, u, v);
    const std::size_t n = d.n();
    DenseMatrix J(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        J(i, i) = 1.0 - g.G1[i];
        J(n + i, n + i) = 1.0 - g.G2[i];
        for (std::size_t j = 0; j < n; ++j) {
            J(i, n + j) = -g.H1(i, j);
            J(n + i, j) = -g.H2(i, j);
        }
    }
    return J;
}

namespace {

std::pair<DenseVector, DenseVector> split(const DenseVector& w, std::size_t n) {
    DenseVector u(n);
    DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = w[i];
        v[i] = w[n + i];
    }
    return {std::move(u), std::move(v)};
}

}  // namespace

solver::ProblemDefinition as_problem(const RiccatiData& d) {
    const std::size_t n = d.n();
    solver::ProblemDefinition p;
    p.dimension = 2 * n;
    p.x0 = DenseVector(2 * n);
    p.residual = [&d, n](const DenseVector& w) {
        const auto [u, v] = split(w, n);
        return f_eval(d, u, v);
    };
    p.jacobian = [&d, n](const DenseVector& w) {
        const auto [u, v] = split(w, n);
        return jacobian_matrix(d, u, v);
    };
    return p;
}

double res_metric(const DenseVector& u, const DenseVector& u_next, const DenseVector& v,
                  const DenseVector& v_next) {
    const auto ratio = [](const DenseVector& prev, const DenseVector& next) {
        const double step = inf_norm(next - prev);
        const double size = inf_norm(next);
        return size == 0.0 ? step : step / size;
    };
    return std::max(ratio(u, u_next), ratio(v, v_next));
}

double stopping_threshold(std::size_t n) {
    return std::sqrt(static_cast<double>(n)) / 2.0 * std::ldexp(1.0, -52);
}

SingularSchur::SingularSchur(std::size_t k)
    : Error("singular Schur complement at iteration " + std::to_string(k)), k_(k) {}

MaxIterations::MaxIterations(std::vector<double> res_history)
    : Error("Riccati solve did not converge within " + std::to_string(res_history.size()) +
            " iterations"),
      res_history_(std::move(res_history)) {}

MinimalSolution solve_minimal(const RiccatiData& d, const RiccatiOptions& opts) {
    const std::size_t n = d.n();
    const DenseVector e = ones(n);
    const double threshold = stopping_threshold(n);
    const auto& P = d.P;
    const auto& Pt = d.P_tilde;

    MinimalSolution sol;
    DenseVector u(n);
    DenseVector v(n);
    if (opts.keep_iterates) sol.iterates.emplace_back(u, v);

    const auto start = std::chrono::steady_clock::now();
    bool converged = false;
    for (std::size_t k = 0; k < opts.max_iterations && !converged; ++k) {
        // Step 1: G(u_k, v_k). G1, G2 are diagonal; (I − G1)⁻¹ is a scale by 1/dg.
        const DenseVector pv = P * v;
        const DenseVector ptu = Pt * u;
        DenseVector dg(n);
        for (std::size_t i = 0; i < n; ++i) dg[i] = 1.0 - pv[i];

        // S = I − G2 − H2(I − G1)⁻¹H1 = I − diag(P̃u) − diag(v)·P̃·diag(u/dg)·P
        DenseMatrix scaled(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = u[i] / dg[i];
            const auto src = P.row(i);
            auto dst = scaled.row(i);
            for (std::size_t j = 0; j < n; ++j) dst[j] = s * src[j];
        }
        DenseMatrix schur = Pt * scaled;
        for (std::size_t i = 0; i < n; ++i) {
            auto r = schur.row(i);
            for (std::size_t j = 0; j < n; ++j) r[j] *= -v[i];
            r[i] += 1.0 - ptu[i];
        }
        linalg::LuFactorization lu;
        try {
            lu = linalg::lu_factor(schur);
        } catch (const SingularMatrix&) {
            throw SingularSchur(k);
        }

        // H1·x = u ∘ (P·x),  H2·x = v ∘ (P̃·x)
        const auto H1 = [&](const DenseVector& x) { return linalg::hadamard(u, P * x); };
        const auto H2 = [&](const DenseVector& x) { return linalg::hadamard(v, Pt * x); };
        const auto Dinv = [&](const DenseVector& x) { return divide(x, dg); };

        // Step 2
        const DenseVector rhs2 = H2(Dinv(e - H1(v))) + e - H2(u);
        const DenseVector v_tilde = linalg::lu_solve(lu, rhs2);
        // Step 3
        const DenseVector u_tilde = Dinv(H1(v_tilde - v) + e);

        DenseVector u_next;
        DenseVector v_next;
        if (opts.plain_newton) {
            u_next = u_tilde;
            v_next = v_tilde;
        } else {
            // Step 4
            const DenseVector ut_pdv = linalg::hadamard(u_tilde, P * (v_tilde - v));
            const DenseVector inner = ut_pdv - H1(v_tilde) + e;
            const DenseVector rhs4 =
                H2(Dinv(inner)) + fma(v_tilde, Pt * (u_tilde - u), e) - H2(u_tilde);
            v_next = linalg::lu_solve(lu, rhs4);
            // Step 5
            u_next = Dinv(ut_pdv + e + H1(v_next - v_tilde));
        }

        const double res = res_metric(u, u_next, v, v_next);
        sol.res_history.push_back(res);
        u = std::move(u_next);
        v = std::move(v_next);
        if (opts.keep_iterates) sol.iterates.emplace_back(u, v);
        if (res <= threshold) {
            sol.iterations = k + 1;
            converged = true;
        }
    }
    sol.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!converged) throw MaxIterations(std::move(sol.res_history));

    sol.X = assemble_X(d, u, v);
    sol.riccati_residual = ricc_residual(d, sol.X);
    sol.u = std::move(u);
    sol.v = std::move(v);
    return sol;
}

MinimalSolution solve_minimal(const TransportParameters& params, const RiccatiOptions& opts) {
    return solve_minimal(build_data(params), opts);
}

DenseMatrix assemble_X(const RiccatiData& d, const DenseVector& u, const DenseVector& v) {
    require_size(d, u, "u");
    require_size(d, v, "v");
    const std::size_t n = d.n();
    DenseMatrix X(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) X(i, j) = d.T(i, j) * (u[i] * v[j]);
    }
    return X;
}

Coefficients coefficient_matrices(const RiccatiData& d) {
    const std::size_t n = d.n();
    Coefficients co{DenseMatrix(n, n), DenseMatrix(n, n, 1.0), DenseMatrix(n, n),
                    DenseMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            co.A(i, j) = (i == j ? d.delta[i] : 0.0) - d.q[j];
            co.C(i, j) = d.q[i] * d.q[j];
            co.D(i, j) = (i == j ? d.gamma[i] : 0.0) - d.q[i];
        }
    }
    return co;
}

double ricc_residual(const RiccatiData& d, const DenseMatrix& X) {
    const std::size_t n = d.n();
    if (X.rows() != n || X.cols() != n) {
        throw DimensionMismatch("X must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    // Xq and qᵀX
    std::vector<double> xq(n, 0.0);
    std::vector<double> qx(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = X.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s += r[j] * d.q[j];
            qx[j] += d.q[i] * r[j];
        }
        xq[i] = s;
    }

    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = X.row(i);
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double xcx = xq[i] * qx[j];
            const double xd = r[j] * d.gamma[j] - xq[i];  // X(Γ − q·eᵀ)
            const double ax = d.delta[i] * r[j] - qx[j];  // (Δ − e·qᵀ)X
            row_sum += std::abs(xcx - xd - ax + 1.0);
        }
        norm = std::max(norm, row_sum);
    }
    return norm;
}

majorant::ConvergenceCertificate instance_certificate(const TransportParameters& params) {
    params.validate();
    return majorant::certify(1.0,
                             majorant::AverageLipschitzModel::constant(params.c * (1.0 + params.alpha)));
}

}  // namespace twostep::riccati
