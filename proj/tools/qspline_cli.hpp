#ifndef QSPLINE_TOOLS_QSPLINE_CLI_HPP
#define QSPLINE_TOOLS_QSPLINE_CLI_HPP

/**
 * @file qspline_cli.hpp
 * @brief The `qspline` command line: fit, eval, sweep, verify.
 *
 * Exit codes: 0 ok, 1 internal, 2 malformed input, 3 singular system,
 * 4 out of domain, 5 verification failed.
 *
 * Kept as a header so the test suites can drive the exact argument parsing
 * in-process with string streams.
 */

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qspline/qspline.hpp"

namespace qspline::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kMalformedInput = 2,
    kSingular = 3,
    kOutOfDomain = 4,
    kVerificationFailed = 5,
};

struct FitOptions {
    std::string input;
    double q = 1.0;
    std::optional<double> dq_left;
    std::optional<double> dq_right;
    std::string output;
};

struct EvalOptions {
    std::string model;
    std::string grid;
    bool extrapolate = false;
};

struct SweepOptions {
    std::string poly;
    std::string knots;
    std::string qs;
    std::size_t grid = 2001;
};

struct VerifyOptions {
    std::string model;
    std::string input;
    std::optional<double> q;
    std::optional<double> dq_left;
    std::optional<double> dq_right;
    double tol = 1e-8;
};

inline int cmd_fit(const FitOptions& o, std::ostream& out) {
    const auto data = io::parse_dataset_file(o.input, {o.dq_left, o.dq_right});
    const auto model = fit(data, QParam(o.q));
    const std::string doc = io::serialize_model(model);
    if (o.output.empty()) {
        out << doc;
    } else {
        std::ofstream f(o.output);
        if (!f) throw std::runtime_error("cannot write '" + o.output + "'");
        f << doc;
    }
    return kOk;
}

inline int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const auto model = io::parse_model_file(o.model);
    const auto spec = io::parse_number_list(o.grid, "--grid");
    if (spec.size() != 3) throw io::ParseError("--grid expects lo,hi,count");
    const double count = spec[2];
    if (count < 1 || count != std::floor(count)) throw io::ParseError("--grid count must be a positive integer");
    if (spec[1] < spec[0]) throw io::ParseError("--grid needs lo <= hi");

    const auto mode = o.extrapolate ? OutOfRange::extrapolate : OutOfRange::error;
    const auto xs = uniform_grid(spec[0], spec[1], static_cast<std::size_t>(count));
    std::vector<double> ys;
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(evaluate(model, x, mode));  // throws before any row is written

    out << "x,s\n";
    for (std::size_t k = 0; k < xs.size(); ++k) out << io::format_number(xs[k]) << ',' << io::format_number(ys[k]) << '\n';
    return kOk;
}

inline int cmd_sweep(const SweepOptions& o, std::ostream& out) {
    const Polynomial target(io::parse_number_list(o.poly, "--poly"));
    auto knots = io::parse_number_list(o.knots, "--knots");
    const auto qs = io::parse_number_list(o.qs, "--q");
    if (o.grid < 2) throw io::ParseError("--grid must be at least 2");
    for (double q : qs)
        if (!(q > 0.0)) throw io::ParseError("--q values must be positive");
    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(target, knots, qs, o.grid);
    } catch (const InvalidDataError& e) {
        throw io::ParseError(std::string("--knots: ") + e.what());
    }

    out << "q,sup_error,l2_error,status\n";
    for (const auto& r : rows) {
        out << io::format_number(r.q) << ',' << io::format_number(r.sup_error) << ',' << io::format_number(r.l2_error)
            << ',' << to_string(r.status) << '\n';
    }
    return kOk;
}

inline int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    std::optional<QSplineModel> model;
    if (!o.model.empty()) {
        model = io::parse_model_file(o.model);
    } else {
        if (o.input.empty() || !o.q) throw io::ParseError("verify needs --model, or --input with --q");
        model = fit(io::parse_dataset_file(o.input, {o.dq_left, o.dq_right}), QParam(*o.q));
    }
    const auto report = verify_model(*model, o.tol);
    out << io::report_to_json(report).dump(2) << '\n';
    return report.all_pass() ? kOk : kVerificationFailed;
}

/// Full command line, argv[0] excluded.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clamped cubic q-spline interpolation"};
    app.name("qspline");
    app.require_subcommand(1);

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a spline to a dataset and print the model JSON");
    fit_cmd->add_option("-i,--input", fit_opt.input, "Dataset (CSV with header x,f, or JSON)")->required();
    fit_cmd->add_option("-q,--q", fit_opt.q, "Deformation parameter q > 0")->required();
    fit_cmd->add_option("--dq-left", fit_opt.dq_left, "D_q f(x_0) (required for CSV input)");
    fit_cmd->add_option("--dq-right", fit_opt.dq_right, "D_q f(x_n) (required for CSV input)");
    fit_cmd->add_option("-o,--output", fit_opt.output, "Write the model here instead of stdout");

    EvalOptions eval_opt;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a uniform grid, CSV x,s");
    eval_cmd->add_option("-m,--model", eval_opt.model, "Model JSON from `fit`")->required();
    eval_cmd->add_option("-g,--grid", eval_opt.grid, "lo,hi,count")->required();
    eval_cmd->add_flag("--extrapolate", eval_opt.extrapolate, "Continue the end pieces outside [x_0, x_n]");

    SweepOptions sweep_opt;
    auto* sweep_cmd = app.add_subcommand("sweep", "Interpolation error of a polynomial over a list of q, CSV");
    sweep_cmd->add_option("-p,--poly", sweep_opt.poly, "Ascending coefficients, e.g. 0,0,0,0,1 for x^4")->required();
    sweep_cmd->add_option("-k,--knots", sweep_opt.knots, "Strictly increasing knots, e.g. -1,0,1")->required();
    sweep_cmd->add_option("-q,--q", sweep_opt.qs, "Comma-separated q values")->required();
    sweep_cmd->add_option("-g,--grid", sweep_opt.grid, "Number of error-grid points")->capture_default_str();

    VerifyOptions verify_opt;
    auto* verify_cmd = app.add_subcommand("verify", "Check every spline condition, JSON report");
    verify_cmd->add_option("-m,--model", verify_opt.model, "Model JSON to check");
    verify_cmd->add_option("-i,--input", verify_opt.input, "Dataset to fit and check");
    verify_cmd->add_option("-q,--q", verify_opt.q, "q used with --input");
    verify_cmd->add_option("--dq-left", verify_opt.dq_left, "D_q f(x_0) for CSV input");
    verify_cmd->add_option("--dq-right", verify_opt.dq_right, "D_q f(x_n) for CSV input");
    verify_cmd->add_option("--tol", verify_opt.tol, "Relative tolerance")->capture_default_str();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kMalformedInput;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit_opt, out);
        if (*eval_cmd) return cmd_eval(eval_opt, out);
        if (*sweep_cmd) return cmd_sweep(sweep_opt, out);
        if (*verify_cmd) return cmd_verify(verify_opt, out);
    } catch (const io::ParseError& e) {
        err << "qspline: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const InvalidDataError& e) {
        err << "qspline: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const DomainError& e) {
        err << "qspline: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const SingularSystemError& e) {
        err << "qspline: " << e.what() << '\n';
        return kSingular;
    } catch (const OutOfDomainError& e) {
        err << "qspline: " << e.what() << " (pass --extrapolate to allow)\n";
        return kOutOfDomain;
    } catch (const std::exception& e) {
        err << "qspline: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}

}  // namespace qspline::cli

#endif  // QSPLINE_TOOLS_QSPLINE_CLI_HPP
