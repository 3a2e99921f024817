#pragma once

// Scalar majorant machinery for the two-step Newton method: the L-average
// Lipschitz models, the majorizing function h, its constants and zeros, the
// scalar two-step recursion on h, and semilocal convergence certificates.
//
// With L(u) the average-Lipschitz model and Λ(t) = ∫₀ᵗ L, W(t) = ∫₀ᵗ L(u)u du,
//
//   h(t)   = β − t + ∫₀ᵗ L(u)(t − u) du = β − t + tΛ(t) − W(t)
//   h'(t)  = Λ(t) − 1
//   h''(t) = L(t)
//
// and the derived constants are
//   r0 : Λ(r0) = 1
//   b  : W(r0)
//   R  : (1/R)∫₀ᴿ L(u)(R − u) du = 1

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace twostep::majorant {

enum class ModelKind { Constant, Gamma, SelfConcordant, Custom };

/// User-supplied L. Either primitive may be left empty, in which case it is
/// integrated numerically (adaptive Simpson, absolute tolerance 1e-12).
struct CustomModel {
    std::function<double(double)> L;
    std::function<double(double)> primitive;           // ∫₀ᵗ L(u) du
    std::function<double(double)> weighted_primitive;  // ∫₀ᵗ L(u)·u du
    /// L is only defined on [0, domain_end).
    double domain_end = std::numeric_limits<double>::infinity();
};

class AverageLipschitzModel {
public:
    static AverageLipschitzModel constant(double lipschitz);
    /// L(u) = 2γ/(1 − γu)³ on [0, 1/γ).
    /// The matching operator condition is often printed with 1 − γ‖x−x0‖ − ‖y−x‖
    /// in its first denominator, although reducing from L gives γ‖y−x‖. Only h is
    /// used here, so nothing below depends on which reading is meant.
    static AverageLipschitzModel gamma_type(double gamma);
    /// The γ = 1 case, kept distinct so certificates report where they came from.
    static AverageLipschitzModel self_concordant();
    static AverageLipschitzModel custom(CustomModel model);

    ModelKind kind() const noexcept { return kind_; }
    /// L for Constant, γ for Gamma/SelfConcordant, NaN for Custom.
    double parameter() const noexcept { return parameter_; }
    /// Supremum of the interval on which L is defined.
    double domain_end() const noexcept;
    std::string name() const;

    double L(double u) const;
    double primitive(double t) const;
    double weighted_primitive(double t) const;

private:
    AverageLipschitzModel(ModelKind kind, double parameter) : kind_(kind), parameter_(parameter) {}

    ModelKind kind_;
    double parameter_;
    CustomModel custom_;
};

struct ModelConstants {
    double r0;
    double b;
    double R;
};

/// Closed forms for Constant and Gamma models; bisection and quadrature for Custom.
/// Throws NoRoot when a Custom primitive never reaches the defining level.
ModelConstants model_constants(const AverageLipschitzModel& model);

/// h for a fixed β > 0 and model; the constants are computed once at construction.
class MajorantFunction {
public:
    MajorantFunction(double beta, AverageLipschitzModel model);

    double beta() const noexcept { return beta_; }
    const AverageLipschitzModel& model() const noexcept { return model_; }
    const ModelConstants& constants() const noexcept { return constants_; }

    /// The function is defined on [0, R] ([0, 1/γ) for Gamma-type models).
    /// Throws DomainExceeded outside.
    double h(double t) const;
    double h_prime(double t) const;
    double h_double_prime(double t) const;

    /// True when β is within a few ulps of b, where both zeros merge into r0.
    bool at_boundary() const noexcept;

private:
    void check_domain(double t) const;

    double beta_;
    AverageLipschitzModel model_;
    ModelConstants constants_;
};

struct Roots {
    double t_star;
    double t_star_star;
};

/// Zeros of h in [0, r0] and [r0, R]. Closed forms for Constant and Gamma
/// models, bisection for Custom. Throws CriterionViolated when β > b.
Roots solve_roots(const MajorantFunction& m);

/// Bracketed bisection on [β, r0] and [r0, R] to relative tolerance 1e-14,
/// for any model. Throws CriterionViolated when β > b.
Roots solve_roots_bisection(const MajorantFunction& m);

struct ConvergenceCertificate {
    double beta = 0.0;
    AverageLipschitzModel model = AverageLipschitzModel::constant(1.0);
    ModelConstants constants{};

    bool criterion_holds = false;  // 0 < β ≤ b
    std::optional<double> t_star;
    std::optional<double> t_star_star;

    /// 2 + t*·H*; positive means the cubic condition holds. Absent at β = b.
    std::optional<double> cubic_margin;
    bool cubic_holds = false;
    std::optional<double> H_star;             // h''(t*)/h'(t*) < 0
    std::optional<double> cubic_coefficient;  // ½H*²(2 − t*H*)/(2 + t*H*), only if cubic_holds
    std::optional<double> q;                  // Gamma-type models only

    /// The cubic condition with the non-strict inequality (2 + t*H* ≥ 0).
    bool cubic_borderline() const noexcept {
        return cubic_margin.has_value() && *cubic_margin == 0.0;
    }
};

/// Never throws on β > b: returns a certificate with criterion_holds = false.
/// Throws InvalidArgument when β is not a positive finite number.
ConvergenceCertificate certify(double beta, const AverageLipschitzModel& model);

struct MajorizingStep {
    double t;
    double s;
};

/// Recorded pairs (t_k, s_k). For k < K the successor t_{k+1} is steps[k+1].t;
/// the last successor is held in `limit` and is not part of the strict chain.
struct MajorizingTrace {
    std::vector<MajorizingStep> steps;
    double limit = 0.0;
    bool converged = false;
    /// Recursion stopped because round-off no longer produced an ordered step.
    bool stalled = false;

    std::size_t size() const noexcept { return steps.size(); }
    /// t_k for k ≤ size(); t_{size()} is the limit estimate.
    double t(std::size_t k) const { return k < steps.size() ? steps[k].t : limit; }
};

inline constexpr std::size_t kDefaultMaxSteps = 100;
inline constexpr double kDefaultSequenceTolerance = 1e-15;

/// Runs s_k = t_k − h(t_k)/h'(t_k), t_{k+1} = s_k − h(s_k)/h'(t_k) from t_0 = 0
/// until t* − t_k < tol or max_k pairs are recorded. When t* is large enough
/// that tol is below four ulps of t*, four ulps is used instead.
/// Throws CriterionViolated if the certificate's criterion does not hold.
MajorizingTrace majorizing_sequence(const ConvergenceCertificate& cert,
                                    std::size_t max_k = kDefaultMaxSteps,
                                    double tol = kDefaultSequenceTolerance);

/// Checks t* − t_{k+1} ≤ ½H*²(t* − t_k)³ + 1e-12 for every recorded k.
/// Throws NotApplicable when H* is undefined (β = b).
bool scalar_cubic_bound_check(const MajorizingTrace& trace, const ConvergenceCertificate& cert);

}  // namespace twostep::majorant
