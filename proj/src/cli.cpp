#include "twostep/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "twostep/errors.hpp"
#include "twostep/solver.hpp"

namespace twostep::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_atomically(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f << contents;
        if (!f) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string matrix_csv(const linalg::DenseMatrix& X) {
    std::string out;
    out.reserve(X.rows() * X.cols() * 24);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto r = X.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j > 0) out += ',';
            out += format_number(r[j]);
        }
        out += '\n';
    }
    return out;
}

struct ModelFlags {
    std::string model;
    std::optional<double> lipschitz;
    std::optional<double> gamma;
    double beta = 0.0;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("--model", f.model, "Average-Lipschitz model")
        ->required()
        ->check(CLI::IsMember({"constant", "gamma", "selfconcordant"}));
    cmd->add_option("--L", f.lipschitz, "Lipschitz constant (constant model)");
    cmd->add_option("--gamma", f.gamma, "gamma (gamma model)");
    cmd->add_option("--beta", f.beta, "beta = |F'(x0)^-1 F(x0)|")->required();
}

majorant::AverageLipschitzModel make_model(const ModelFlags& f) {
    using majorant::AverageLipschitzModel;
    if (f.model == "constant") {
        if (!f.lipschitz) throw InvalidArgument("--model constant needs --L");
        return AverageLipschitzModel::constant(*f.lipschitz);
    }
    if (f.model == "gamma") {
        if (!f.gamma) throw InvalidArgument("--model gamma needs --gamma");
        return AverageLipschitzModel::gamma_type(*f.gamma);
    }
    return AverageLipschitzModel::self_concordant();
}

void print_text(std::ostream& out, const json& doc) {
    for (const auto& [key, value] : doc.items()) {
        out << key << " = ";
        if (value.is_number_float()) {
            out << format_number(value.get<double>());
        } else {
            out << value.dump();
        }
        out << '\n';
    }
}

// The six reference (α, c) pairs, with c kept as a ratio so
// that 1/3 is rounded once, at division.
struct TablePair {
    double alpha;
    int c_num;
    int c_den;
    const char* l_beta;
};

constexpr TablePair kTablePairs[] = {
    {0.5, 1, 3, "1/2"},  {0.5, 2, 9, "1/3"},  {0.5, 1, 9, "1/6"},
    {0.25, 2, 5, "1/2"}, {0.25, 1, 3, "5/12"}, {0.25, 1, 10, "1/8"},
};

int cmd_certify(const ModelFlags& flags, const std::string& format, std::ostream& out) {
    const auto model = make_model(flags);
    const auto cert = majorant::certify(flags.beta, model);
    const json doc = certificate_json(cert);
    if (format == "json") {
        out << doc.dump(2) << '\n';
    } else {
        print_text(out, doc);
    }
    return cert.criterion_holds ? kSuccess : kCriterionFailed;
}

int cmd_majorize(const ModelFlags& flags, std::size_t max_k, double tol, std::ostream& out) {
    const auto cert = majorant::certify(flags.beta, make_model(flags));
    if (!cert.criterion_holds) throw CriterionViolated("beta exceeds b; no majorizing sequence");
    const auto trace = majorant::majorizing_sequence(cert, max_k, tol);
    out << "k,t_k,s_k\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << k << ',' << format_number(trace.steps[k].t) << ','
            << format_number(trace.steps[k].s) << '\n';
    }
    return kSuccess;
}

int cmd_order(const std::vector<double>& errors, std::ostream& out) {
    const double order = solver::estimate_order(errors);
    out << "order\n" << format_number(order) << '\n';
    return kSuccess;
}

struct RiccatiFlags {
    double alpha = 0.0;
    double c = 1.0;
    std::size_t n = 0;
    bool plain_newton = false;
    std::string dump_x;
    std::string format = "json";
};

int cmd_solve_riccati(const RiccatiFlags& f, std::ostream& out) {
    const riccati::TransportParameters params{f.alpha, f.c, f.n};
    params.validate();
    riccati::RiccatiOptions opts;
    opts.plain_newton = f.plain_newton;
    const auto data = riccati::build_data(params);
    const auto sol = riccati::solve_minimal(data, opts);
    json doc = solution_json(params, sol, riccati::instance_certificate(params));
    doc["plain_newton"] = f.plain_newton;
    if (!f.dump_x.empty()) write_atomically(f.dump_x, matrix_csv(sol.X));
    if (f.format == "json") {
        out << doc.dump(2) << '\n';
    } else {
        print_text(out, doc);
    }
    return kSuccess;
}

int cmd_bench(const std::vector<std::size_t>& sizes, const std::string& out_dir,
              std::ostream& out) {
    if (sizes.empty()) throw InvalidArgument("--sizes needs at least one problem size");
    for (std::size_t n : sizes) riccati::TransportParameters{0.5, 0.5, n}.validate();
    fs::create_directories(out_dir);

    for (std::size_t n : sizes) {
        std::string table = "alpha,c,L_beta,iter,Res,cpu_time\n";
        out << "n = " << n << '\n';
        for (const auto& pair : kTablePairs) {
            const double c = static_cast<double>(pair.c_num) / pair.c_den;
            const riccati::TransportParameters params{pair.alpha, c, n};
            const auto sol = riccati::solve_minimal(params);

            table += format_number(pair.alpha) + ',' + format_number(c) + ',' +
                     format_number(c * (1.0 + pair.alpha)) + ',' +
                     std::to_string(sol.iterations) + ',' +
                     format_number(sol.res_history.back()) + ',' +
                     format_number(sol.solve_seconds) + '\n';

            std::string history = "k,res\n";
            for (std::size_t k = 0; k < sol.res_history.size(); ++k) {
                history += std::to_string(k + 1) + ',' + format_number(sol.res_history[k]) + '\n';
            }
            std::ostringstream name;
            name << "history_n" << n << "_alpha" << pair.alpha << "_c" << pair.c_num << '-'
                 << pair.c_den << ".csv";
            write_atomically(fs::path(out_dir) / name.str(), history);

            out << "  (" << pair.alpha << ", " << pair.c_num << '/' << pair.c_den << ")  Lbeta "
                << pair.l_beta << "  iter " << sol.iterations << "  Res " << std::setprecision(4)
                << std::scientific << sol.res_history.back() << "  time "
                << std::setprecision(3) << std::fixed << sol.solve_seconds << " s\n"
                << std::defaultfloat;
        }
        write_atomically(fs::path(out_dir) / ("table_n" + std::to_string(n) + ".csv"), table);
    }
    return kSuccess;
}

}  // namespace

json certificate_json(const majorant::ConvergenceCertificate& cert) {
    json doc;
    doc["beta"] = cert.beta;
    doc["model"] = cert.model.name();
    doc["model_parameter"] = cert.model.kind() == majorant::ModelKind::Custom
                                 ? json(nullptr)
                                 : json(cert.model.parameter());
    doc["r0"] = cert.constants.r0;
    doc["b"] = cert.constants.b;
    doc["R"] = cert.constants.R;
    doc["t_star"] = optional_number(cert.t_star);
    doc["t_star2"] = optional_number(cert.t_star_star);
    doc["criterion_holds"] = cert.criterion_holds;
    doc["cubic_holds"] = cert.cubic_holds;
    doc["H_star"] = optional_number(cert.H_star);
    doc["cubic_coefficient"] = optional_number(cert.cubic_coefficient);
    doc["q"] = optional_number(cert.q);
    return doc;
}

json solution_json(const riccati::TransportParameters& params, const riccati::MinimalSolution& sol,
                   const majorant::ConvergenceCertificate& cert) {
    json doc;
    doc["alpha"] = params.alpha;
    doc["c"] = params.c;
    doc["n"] = params.n;
    doc["L_beta"] = params.c * (1.0 + params.alpha) * cert.beta;
    doc["iterations"] = sol.iterations;
    doc["res_history"] = sol.res_history;
    doc["riccati_residual"] = sol.riccati_residual;
    doc["t_star"] = optional_number(cert.t_star);
    doc["wall_time_s"] = sol.solve_seconds;
    return doc;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-step Newton method: convergence certificates and the transport Riccati solver",
                 "twostep"};
    app.require_subcommand(1);

    std::string format = "json";
    ModelFlags model_flags;
    auto* certify = app.add_subcommand("certify", "Semilocal convergence certificate");
    add_model_flags(certify, model_flags);
    certify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    ModelFlags majorize_flags;
    std::size_t max_k = majorant::kDefaultMaxSteps;
    double tol = majorant::kDefaultSequenceTolerance;
    auto* majorize = app.add_subcommand("majorize", "Scalar majorizing sequence as CSV");
    add_model_flags(majorize, majorize_flags);
    majorize->add_option("--k", max_k, "Maximum number of (t_k, s_k) pairs");
    majorize->add_option("--tol", tol, "Stop once t* - t_k < tol");

    RiccatiFlags riccati_flags;
    auto* solve = app.add_subcommand("solve-riccati", "Minimal positive solution of the NSARE");
    solve->add_option("--alpha", riccati_flags.alpha)->required();
    solve->add_option("--c", riccati_flags.c)->required();
    solve->add_option("--n", riccati_flags.n)->required();
    solve->add_flag("--plain-newton", riccati_flags.plain_newton, "One-step Newton for comparison");
    solve->add_option("--dump-x", riccati_flags.dump_x, "Write X as CSV to this path");
    solve->add_option("--format", riccati_flags.format)->check(CLI::IsMember({"json", "text"}));

    std::vector<std::size_t> sizes;
    std::string out_dir = ".";
    auto* bench = app.add_subcommand("bench", "Reproduce the iteration tables");
    bench->add_option("--sizes", sizes, "Comma-separated problem sizes")
        ->required()
        ->delimiter(',');
    bench->add_option("--out", out_dir, "Output directory");

    std::vector<double> errors;
    auto* order = app.add_subcommand("order", "Empirical convergence order");
    order->add_option("--errors", errors, "Comma-separated error norms")
        ->required()
        ->delimiter(',');

    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("twostep");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (certify->parsed()) return cmd_certify(model_flags, format, out);
        if (majorize->parsed()) return cmd_majorize(majorize_flags, max_k, tol, out);
        if (solve->parsed()) return cmd_solve_riccati(riccati_flags, out);
        if (bench->parsed()) return cmd_bench(sizes, out_dir, out);
        if (order->parsed()) return cmd_order(errors, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidSize& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const CriterionViolated& e) {
        err << "error: " << e.what() << '\n';
        return kCriterionFailed;
    } catch (const riccati::MaxIterations& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const riccati::SingularSchur& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    }
    return kUsage;
}

}  // namespace twostep::cli
