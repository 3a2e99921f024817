#include "twostep/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twostep/errors.hpp"

namespace twostep::majorant {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// β is treated as equal to b when it lies within this many ulps of it.
constexpr double kBoundaryUlps = 16.0;
constexpr double kBisectionRelTol = 1e-14;
constexpr double kSimpsonTol = 1e-12;
constexpr double kCubicSlack = 1e-12;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b) {
    if (b <= a) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, kSimpsonTol, 50);
}

// f(lo) and f(hi) must have opposite signs (or one is zero).
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= kBisectionRelTol * std::max(std::abs(lo), std::abs(hi))) break;
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Smallest upper bracket in [start, ...) at which g becomes >= 0, staying
// inside the model's domain.
template <class G>
double expand_bracket(G&& g, double start, double domain_end, const char* what) {
    if (std::isfinite(domain_end)) {
        for (int k = 1; k <= 60; ++k) {
            const double x = domain_end * (1.0 - std::ldexp(1.0, -k));
            if (x > start && g(x) >= 0.0) return x;
        }
    } else {
        double x = std::max(1.0, 2.0 * start);
        for (int k = 0; k < 2000 && std::isfinite(x); ++k, x *= 2.0) {
            if (g(x) >= 0.0) return x;
        }
    }
    throw NoRoot(std::string("custom model: ") + what + " never reached");
}

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

AverageLipschitzModel AverageLipschitzModel::constant(double lipschitz) {
    require_positive(lipschitz, "Lipschitz constant L");
    return {ModelKind::Constant, lipschitz};
}

AverageLipschitzModel AverageLipschitzModel::gamma_type(double gamma) {
    require_positive(gamma, "gamma");
    return {ModelKind::Gamma, gamma};
}

AverageLipschitzModel AverageLipschitzModel::self_concordant() {
    return {ModelKind::SelfConcordant, 1.0};
}

AverageLipschitzModel AverageLipschitzModel::custom(CustomModel model) {
    if (!model.L) throw InvalidArgument("custom model requires L");
    if (!(model.domain_end > 0.0)) throw InvalidArgument("custom model domain must be nonempty");
    if (!(model.L(0.0) > 0.0)) throw InvalidArgument("custom model requires L(0) > 0");
    AverageLipschitzModel out(ModelKind::Custom, kNaN);
    out.custom_ = std::move(model);
    return out;
}

double AverageLipschitzModel::domain_end() const noexcept {
    switch (kind_) {
        case ModelKind::Constant:
            return kInf;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant:
            return 1.0 / parameter_;
        case ModelKind::Custom:
            return custom_.domain_end;
    }
    return kInf;
}

std::string AverageLipschitzModel::name() const {
    switch (kind_) {
        case ModelKind::Constant:
            return "constant";
        case ModelKind::Gamma:
            return "gamma";
        case ModelKind::SelfConcordant:
            return "selfconcordant";
        case ModelKind::Custom:
            return "custom";
    }
    return "unknown";
}

double AverageLipschitzModel::L(double u) const {
    switch (kind_) {
        case ModelKind::Constant:
            return parameter_;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant: {
            const double d = 1.0 - parameter_ * u;
            return 2.0 * parameter_ / (d * d * d);
        }
        case ModelKind::Custom:
            return custom_.L(u);
    }
    return kNaN;
}

double AverageLipschitzModel::primitive(double t) const {
    switch (kind_) {
        case ModelKind::Constant:
            return parameter_ * t;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant: {
            const double d = 1.0 - parameter_ * t;
            return 1.0 / (d * d) - 1.0;
        }
        case ModelKind::Custom:
            if (custom_.primitive) return custom_.primitive(t);
            return adaptive_simpson(custom_.L, 0.0, t);
    }
    return kNaN;
}

double AverageLipschitzModel::weighted_primitive(double t) const {
    switch (kind_) {
        case ModelKind::Constant:
            return 0.5 * parameter_ * t * t;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant: {
            // t·Λ(t) − W(t) = γt²/(1 − γt)
            const double g = parameter_;
            return t * primitive(t) - g * t * t / (1.0 - g * t);
        }
        case ModelKind::Custom:
            if (custom_.weighted_primitive) return custom_.weighted_primitive(t);
            return adaptive_simpson([this](double u) { return custom_.L(u) * u; }, 0.0, t);
    }
    return kNaN;
}

ModelConstants model_constants(const AverageLipschitzModel& model) {
    const double p = model.parameter();
    switch (model.kind()) {
        case ModelKind::Constant:
            return {1.0 / p, 1.0 / (2.0 * p), 2.0 / p};
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant:
            return {(1.0 - 1.0 / std::sqrt(2.0)) / p, (3.0 - 2.0 * std::sqrt(2.0)) / p,
                    1.0 / (2.0 * p)};
        case ModelKind::Custom:
            break;
    }

    const double end = model.domain_end();
    const auto level = [&](double t) { return model.primitive(t) - 1.0; };
    const double r0_hi = expand_bracket(level, 0.0, end, "primitive level 1");
    const double r0 = bisect(level, 0.0, r0_hi);
    const double b = model.weighted_primitive(r0);

    // (1/R)∫₀ᴿ L(u)(R − u) du − 1 = Λ(R) − W(R)/R − 1, increasing in R.
    const auto normalization = [&](double r) {
        return model.primitive(r) - model.weighted_primitive(r) / r - 1.0;
    };
    const double R_hi = expand_bracket(normalization, r0, end, "normalization level 1");
    const double R = bisect(normalization, r0, R_hi);
    return {r0, b, R};
}

MajorantFunction::MajorantFunction(double beta, AverageLipschitzModel model)
    : beta_(beta), model_(std::move(model)), constants_{} {
    require_positive(beta, "beta");
    constants_ = model_constants(model_);
}

bool MajorantFunction::at_boundary() const noexcept {
    return std::abs(beta_ - constants_.b) <= kBoundaryUlps * kEps * constants_.b;
}

void MajorantFunction::check_domain(double t) const {
    bool inside = t >= 0.0;
    switch (model_.kind()) {
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant:
            inside = inside && t < model_.domain_end();
            break;
        case ModelKind::Constant:
        case ModelKind::Custom:
            inside = inside && t <= constants_.R;
            break;
    }
    if (!inside) throw DomainExceeded("majorant evaluated outside its domain at t=" + std::to_string(t));
}

double MajorantFunction::h(double t) const {
    check_domain(t);
    const double p = model_.parameter();
    switch (model_.kind()) {
        case ModelKind::Constant:
            return beta_ - t + 0.5 * p * t * t;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant:
            return beta_ - t + p * t * t / (1.0 - p * t);
        case ModelKind::Custom:
            break;
    }
    return beta_ - t + t * model_.primitive(t) - model_.weighted_primitive(t);
}

double MajorantFunction::h_prime(double t) const {
    check_domain(t);
    const double p = model_.parameter();
    switch (model_.kind()) {
        case ModelKind::Constant:
            return -1.0 + p * t;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant: {
            const double d = 1.0 - p * t;
            return -2.0 + 1.0 / (d * d);
        }
        case ModelKind::Custom:
            break;
    }
    return model_.primitive(t) - 1.0;
}

double MajorantFunction::h_double_prime(double t) const {
    check_domain(t);
    return model_.L(t);
}

namespace {

void require_criterion(const MajorantFunction& m) {
    if (m.beta() > m.constants().b && !m.at_boundary()) {
        throw CriterionViolated("beta exceeds b: no zero of the majorizing function in [0, r0]");
    }
}

}  // namespace

Roots solve_roots_bisection(const MajorantFunction& m) {
    require_criterion(m);
    const auto& c = m.constants();
    if (m.at_boundary()) return {c.r0, c.r0};
    const auto h = [&](double t) { return m.h(t); };
    return {bisect(h, m.beta(), c.r0), bisect(h, c.r0, c.R)};
}

Roots solve_roots(const MajorantFunction& m) {
    require_criterion(m);
    const auto& c = m.constants();
    if (m.at_boundary()) return {c.r0, c.r0};

    const double beta = m.beta();
    const double p = m.model().parameter();
    switch (m.model().kind()) {
        case ModelKind::Constant: {
            // t* = (1 − √(1−2Lβ))/L, written without the cancellation.
            const double s = std::sqrt(std::max(0.0, 1.0 - 2.0 * p * beta));
            return {2.0 * beta / (1.0 + s), (1.0 + s) / p};
        }
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant: {
            // Zeros of 2γt² − (1+α)t + β with α = βγ.
            const double a = beta * p;
            const double root = std::sqrt(std::max(0.0, (1.0 + a) * (1.0 + a) - 8.0 * a));
            return {2.0 * beta / (1.0 + a + root), (1.0 + a + root) / (4.0 * p)};
        }
        case ModelKind::Custom:
            break;
    }
    return solve_roots_bisection(m);
}

ConvergenceCertificate certify(double beta, const AverageLipschitzModel& model) {
    const MajorantFunction m(beta, model);

    ConvergenceCertificate cert;
    cert.beta = beta;
    cert.model = model;
    cert.constants = m.constants();
    cert.criterion_holds = beta <= cert.constants.b || m.at_boundary();
    if (!cert.criterion_holds) return cert;

    const Roots roots = solve_roots(m);
    cert.t_star = roots.t_star;
    cert.t_star_star = roots.t_star_star;
    if (m.at_boundary()) return cert;  // h'(t*) = 0: H* undefined, no cubic rate

    const double ts = roots.t_star;
    const double p = model.parameter();
    double H = 0.0;
    switch (model.kind()) {
        case ModelKind::Constant:
            H = -p / std::sqrt(1.0 - 2.0 * p * beta);
            break;
        case ModelKind::Gamma:
        case ModelKind::SelfConcordant: {
            const double a = beta * p;
            const double root = std::sqrt(std::max(0.0, (1.0 + a) * (1.0 + a) - 8.0 * a));
            const double w = 3.0 - a + root;
            H = -32.0 * p / (root * w * w);
            const double lead = root * w * w;
            const double tail = 4.0 * (1.0 + a - root);
            cert.q = (lead + tail) / (lead - tail);
            break;
        }
        case ModelKind::Custom:
            H = m.h_double_prime(ts) / m.h_prime(ts);
            break;
    }
    cert.H_star = H;
    cert.cubic_margin = 2.0 + ts * H;
    cert.cubic_holds = *cert.cubic_margin > 0.0;
    if (cert.cubic_holds) {
        cert.cubic_coefficient = 0.5 * H * H * (2.0 - ts * H) / (2.0 + ts * H);
    }
    return cert;
}

MajorizingTrace majorizing_sequence(const ConvergenceCertificate& cert, std::size_t max_k,
                                    double tol) {
    if (!cert.criterion_holds || !cert.t_star) {
        throw CriterionViolated("majorizing sequence requires 0 < beta <= b");
    }
    const MajorantFunction m(cert.beta, cert.model);
    const double t_star = *cert.t_star;
    // An absolute tolerance below the spacing of doubles near t* is unreachable.
    const double reach = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * t_star);

    MajorizingTrace trace;
    double t = 0.0;
    while (trace.steps.size() < max_k) {
        if (t_star - t < reach) break;
        const double hp = m.h_prime(t);
        const double s = t - m.h(t) / hp;
        if (!(t < s && s < t_star)) {
            // Same situation one half-step earlier: s is the best estimate if
            // it did not move backwards.
            if (s > t) t = s;
            trace.stalled = !(std::abs(t_star - t) < reach);
            break;
        }
        trace.steps.push_back({t, s});
        const double next = s - m.h(s) / hp;
        if (!(s < next && next < t_star)) {
            // The step landed on t* to working precision (or round-off broke
            // the ordering); keep it only as the limit estimate.
            trace.stalled = !(std::abs(t_star - next) < reach);
            t = next;
            break;
        }
        t = next;
    }
    trace.limit = t;
    trace.converged = std::abs(t_star - t) < reach;
    return trace;
}

bool scalar_cubic_bound_check(const MajorizingTrace& trace, const ConvergenceCertificate& cert) {
    if (!cert.H_star || !cert.t_star) {
        throw NotApplicable("cubic bound needs H*, which is undefined at beta = b");
    }
    const double t_star = *cert.t_star;
    const double c = 0.5 * (*cert.H_star) * (*cert.H_star);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double gap = t_star - trace.t(k);
        const double next_gap = t_star - trace.t(k + 1);
        if (next_gap > c * gap * gap * gap + kCubicSlack) return false;
    }
    return true;
}

}  // namespace twostep::majorant
