// Command-line front end. Talks to the library exclusively through the C
// interface; exit codes follow it: 0 requirement holds / success, 1 usage
// or input error, 2 violation found, 3 solver limit hit.

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cexplain/cexplain.h"

namespace {

struct CommonOpts {
    std::string model_path;
    std::string target;
    double lambda = 0.0;
    double epsilon = 1e-6;
    int max_conjunction = 1;
    bool describe_targets = true;
    std::string terminal_action;
    double time_limit = 0.0;
    long node_limit = 0;
    std::string format = "text";
    std::string out;
};

cex_options make_options(const CommonOpts& c) {
    cex_options o;
    cex_options_init(&o);
    o.epsilon = c.epsilon;
    o.max_conjunction = c.max_conjunction;
    o.describe_targets = c.describe_targets ? 1 : 0;
    o.terminal_action =
        c.terminal_action.empty() ? nullptr : c.terminal_action.c_str();
    o.time_limit_seconds = c.time_limit;
    o.node_limit = c.node_limit;
    o.machine_report = c.format == "machine" ? 1 : 0;
    return o;
}

using ModelHandle = std::unique_ptr<cex_model, decltype(&cex_model_free)>;

ModelHandle load_model(const std::string& path) {
    ModelHandle m(cex_model_load(path.c_str()), &cex_model_free);
    if (!m) std::fprintf(stderr, "error: %s\n", cex_last_error());
    return m;
}

int emit(const char* text, const std::string& out_path) {
    if (!text) return 0;
    if (out_path.empty()) {
        std::fputs(text, stdout);
        return 0;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
        return 1;
    }
    f << text;
    return f.good() ? 0 : 1;
}

const char* target_or_null(const CommonOpts& c) {
    return c.target.empty() ? nullptr : c.target.c_str();
}

// check / explain / baseline share the shape: load, run, print, map status.
int run_report_command(const CommonOpts& c,
                       cex_status (*fn)(const cex_model*, const char*, double,
                                        const cex_options*, char**)) {
    const ModelHandle m = load_model(c.model_path);
    if (!m) return 1;
    const cex_options o = make_options(c);
    char* report = nullptr;
    const cex_status st = fn(m.get(), target_or_null(c), c.lambda, &o, &report);
    if (st == CEX_ERROR) {
        std::fprintf(stderr, "error: %s\n", cex_last_error());
        cex_string_free(report);
        return 1;
    }
    const int emit_rc = emit(report, c.out);
    cex_string_free(report);
    return emit_rc ? 1 : (int)st;
}

void add_requirement_flags(CLI::App* sub, CommonOpts& c, bool lambda_required) {
    sub->add_option("model", c.model_path, "model file")->required();
    sub->add_option("--target", c.target,
                    "target proposition or comma-separated states");
    auto* l = sub->add_option("--lambda", c.lambda,
                              "probability threshold of Pr(eventually T)");
    if (lambda_required) l->required();
}

void add_solver_flags(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--epsilon", c.epsilon,
                    "violation margin above lambda (default 1e-6)");
    sub->add_option("--time-limit", c.time_limit,
                    "solver time limit in seconds (default from "
                    "CEXPLAIN_TIME_LIMIT)");
    sub->add_option("--node-limit", c.node_limit,
                    "branch-and-bound node limit");
}

void add_sentence_flags(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--max-conjunction", c.max_conjunction,
                    "propositions per sentence (default 1)");
    sub->add_flag("--describe-targets,!--no-describe-targets",
                  c.describe_targets,
                  "append one sentence per entered target (default on)");
    sub->add_option("--terminal-action", c.terminal_action,
                    "action of target sentences (default stop)");
}

void add_output_flags(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--format", c.format, "report format")
        ->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--out", c.out, "write the report to a file");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explainable counterexamples for MDP mission plans"};
    app.require_subcommand(1);
    int rc = 0;

    CommonOpts check_opts;
    auto* check = app.add_subcommand(
        "check", "model-check the reachability requirement");
    add_requirement_flags(check, check_opts, true);
    add_output_flags(check, check_opts);
    check->callback(
        [&] { rc = run_report_command(check_opts, &cex_check); });

    CommonOpts explain_opts;
    auto* explain = app.add_subcommand(
        "explain", "compute a minimal explainable counterexample");
    add_requirement_flags(explain, explain_opts, true);
    add_sentence_flags(explain, explain_opts);
    add_solver_flags(explain, explain_opts);
    add_output_flags(explain, explain_opts);
    explain->callback(
        [&] { rc = run_report_command(explain_opts, &cex_explain); });

    CommonOpts baseline_opts;
    auto* baseline = app.add_subcommand(
        "baseline", "compute a state-minimal critical subsystem");
    add_requirement_flags(baseline, baseline_opts, true);
    add_solver_flags(baseline, baseline_opts);
    add_output_flags(baseline, baseline_opts);
    baseline->callback(
        [&] { rc = run_report_command(baseline_opts, &cex_baseline); });

    CommonOpts lp_opts;
    std::string encoding = "explain";
    auto* export_lp = app.add_subcommand(
        "export-lp", "write the MILP encoding in LP format");
    add_requirement_flags(export_lp, lp_opts, true);
    export_lp->add_option("--encoding", encoding, "explain or minstate")
        ->check(CLI::IsMember({"explain", "minstate"}));
    add_sentence_flags(export_lp, lp_opts);
    export_lp->add_option("--epsilon", lp_opts.epsilon,
                          "violation margin above lambda (default 1e-6)");
    export_lp->add_option("--out", lp_opts.out, "write the LP to a file");
    export_lp->callback([&] {
        const ModelHandle m = load_model(lp_opts.model_path);
        if (!m) {
            rc = 1;
            return;
        }
        const cex_options o = make_options(lp_opts);
        char* text = nullptr;
        const cex_status st =
            cex_export_lp(m.get(), target_or_null(lp_opts), lp_opts.lambda,
                          encoding.c_str(), &o, &text);
        if (st != CEX_OK) {
            std::fprintf(stderr, "error: %s\n", cex_last_error());
            cex_string_free(text);
            rc = 1;
            return;
        }
        rc = emit(text, lp_opts.out);
        cex_string_free(text);
    });

    int wh_n = 10;
    std::string wh_layout;
    std::string wh_out;
    auto* warehouse = app.add_subcommand(
        "warehouse", "generate a grid-world mission model");
    warehouse->add_option("--n", wh_n, "grid side length (default 10)");
    warehouse->add_option("--layout", wh_layout, "layout file overriding --n");
    warehouse->add_option("--out", wh_out, "write the model to a file");
    warehouse->callback([&] {
        std::string layout_text;
        if (!wh_layout.empty()) {
            std::ifstream f(wh_layout, std::ios::binary);
            if (!f) {
                std::fprintf(stderr, "error: cannot read %s\n",
                             wh_layout.c_str());
                rc = 1;
                return;
            }
            std::ostringstream ss;
            ss << f.rdbuf();
            layout_text = ss.str();
        }
        const ModelHandle m(
            cex_model_warehouse(wh_n,
                                layout_text.empty() ? nullptr
                                                    : layout_text.c_str()),
            &cex_model_free);
        if (!m) {
            std::fprintf(stderr, "error: %s\n", cex_last_error());
            rc = 1;
            return;
        }
        char* text = cex_model_serialize(m.get());
        if (!text) {
            std::fprintf(stderr, "error: %s\n", cex_last_error());
            rc = 1;
            return;
        }
        rc = emit(text, wh_out);
        cex_string_free(text);
    });

    std::string series_ns = "5,10";
    CommonOpts series_opts;
    series_opts.lambda = 0.1;
    auto* series = app.add_subcommand(
        "series", "scalability table over warehouse sizes");
    series->add_option("--n-list", series_ns,
                       "comma-separated grid side lengths (default 5,10)");
    series->add_option("--lambda", series_opts.lambda,
                       "probability threshold (default 0.1)");
    add_solver_flags(series, series_opts);
    series->add_option("--out", series_opts.out, "write the table to a file");
    series->callback([&] {
        std::vector<int> ns;
        std::stringstream ss(series_ns);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                if (!item.empty()) ns.push_back(std::stoi(item));
            } catch (const std::exception&) {
                std::fprintf(stderr, "error: bad side length '%s'\n",
                             item.c_str());
                rc = 1;
                return;
            }
        }
        const cex_options o = make_options(series_opts);
        char* table = nullptr;
        const cex_status st =
            cex_series(ns.data(), ns.size(), series_opts.lambda, &o, &table);
        if (st != CEX_OK) {
            std::fprintf(stderr, "error: %s\n", cex_last_error());
            cex_string_free(table);
            rc = 1;
            return;
        }
        rc = emit(table, series_opts.out);
        cex_string_free(table);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return rc;
}
