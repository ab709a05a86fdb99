#include "cexplain/cexplain.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include "model_io.hpp"
#include "pipeline.hpp"
#include "warehouse.hpp"

namespace {

thread_local std::string t_error;

void clear_error() { t_error.clear(); }

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) return nullptr;
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

struct cex_model {
    cexplain::ModelFile file;
    std::string digest;
    std::string default_target;   // proposition name, generated models only
    std::string default_terminal; // action name, generated models only
};

namespace {

cexplain::PipelineOptions to_pipeline(const cex_model* model,
                                      const cex_options* opt) {
    cexplain::PipelineOptions p;
    if (opt) {
        p.epsilon = opt->epsilon;
        p.max_conjunction = opt->max_conjunction;
        p.describe_targets = opt->describe_targets != 0;
        if (opt->terminal_action && opt->terminal_action[0])
            p.terminal_action = opt->terminal_action;
        if (opt->node_limit > 0) p.solver.node_limit = opt->node_limit;
        if (opt->time_limit_seconds > 0)
            p.solver.time_limit_seconds = opt->time_limit_seconds;
    }
    if (p.terminal_action.empty() && model)
        p.terminal_action = model->default_terminal;
    if (!opt || opt->time_limit_seconds <= 0) {
        if (const char* env = std::getenv("CEXPLAIN_TIME_LIMIT")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end && end != env && *end == '\0' && v > 0)
                p.solver.time_limit_seconds = v;
        }
    }
    return p;
}

// The requirement string, with the model's generated default as fallback.
cexplain::ReachabilityRequirement make_requirement(const cex_model* model,
                                                   const char* target,
                                                   double lambda) {
    std::string t;
    if (target && target[0]) {
        t = target;
    } else if (!model->default_target.empty()) {
        t = model->default_target;
    } else {
        throw std::invalid_argument(
            "no target given and the model declares no default");
    }
    return cexplain::parse_requirement(model->file.mdp, t, lambda);
}

bool machine(const cex_options* opt) {
    return opt && opt->machine_report != 0;
}

}  // namespace

extern "C" {

void cex_options_init(cex_options* opt) {
    if (!opt) return;
    opt->epsilon = 1e-6;
    opt->max_conjunction = 1;
    opt->describe_targets = 1;
    opt->terminal_action = nullptr;
    opt->time_limit_seconds = 0.0;
    opt->node_limit = 0;
    opt->machine_report = 0;
}

cex_model* cex_model_load(const char* path) {
    clear_error();
    if (!path) {
        t_error = "null path";
        return nullptr;
    }
    try {
        auto* m = new cex_model;
        const std::string text = cexplain::read_text_file(path);
        m->file = cexplain::parse_model(text);
        m->digest = cexplain::fnv1a_digest(text);
        return m;
    } catch (const std::exception& e) {
        t_error = std::string(path) + ": " + e.what();
        return nullptr;
    }
}

cex_model* cex_model_parse(const char* text) {
    clear_error();
    if (!text) {
        t_error = "null text";
        return nullptr;
    }
    try {
        auto* m = new cex_model;
        m->file = cexplain::parse_model(text);
        m->digest = cexplain::fnv1a_digest(text);
        return m;
    } catch (const std::exception& e) {
        t_error = e.what();
        return nullptr;
    }
}

cex_model* cex_model_warehouse(int n, const char* layout_text) {
    clear_error();
    try {
        const cexplain::GridLayout layout =
            layout_text && layout_text[0] ? cexplain::parse_layout(layout_text)
                                          : cexplain::default_layout(n);
        const cexplain::WarehouseInstance inst =
            cexplain::generate_warehouse(layout);
        auto* m = new cex_model;
        m->file.mdp = inst.mdp;
        m->file.vocab = inst.vocab;
        m->default_target = inst.mdp.prop_names[inst.target_prop];
        m->default_terminal = inst.mdp.action_names[inst.terminal_action];
        m->digest = cexplain::fnv1a_digest(
            cexplain::serialize_model(m->file.mdp, m->file.vocab));
        return m;
    } catch (const std::exception& e) {
        t_error = e.what();
        return nullptr;
    }
}

void cex_model_free(cex_model* model) { delete model; }

char* cex_model_serialize(const cex_model* model) {
    clear_error();
    if (!model) {
        t_error = "null model";
        return nullptr;
    }
    try {
        return dup_string(
            cexplain::serialize_model(model->file.mdp, model->file.vocab));
    } catch (const std::exception& e) {
        t_error = e.what();
        return nullptr;
    }
}

cex_status cex_check(const cex_model* model, const char* target, double lambda,
                     const cex_options* opt, char** report) {
    clear_error();
    if (report) *report = nullptr;
    if (!model) {
        t_error = "null model";
        return CEX_ERROR;
    }
    try {
        const auto req = make_requirement(model, target, lambda);
        const cexplain::CheckReport rep =
            cexplain::run_check(model->file.mdp, req);
        if (report)
            *report = dup_string(cexplain::render_check_report(
                rep, machine(opt), model->digest));
        return rep.violated ? CEX_VIOLATION : CEX_OK;
    } catch (const std::exception& e) {
        t_error = e.what();
        return CEX_ERROR;
    }
}

cex_status cex_explain(const cex_model* model, const char* target,
                       double lambda, const cex_options* opt, char** report) {
    clear_error();
    if (report) *report = nullptr;
    if (!model) {
        t_error = "null model";
        return CEX_ERROR;
    }
    try {
        const auto req = make_requirement(model, target, lambda);
        const cexplain::ExplainReport rep = cexplain::run_explain(
            model->file.mdp, model->file.vocab, req, to_pipeline(model, opt));
        if (report)
            *report = dup_string(cexplain::render_explain_report(
                model->file.mdp, rep, machine(opt), model->digest));
        if (!rep.violated) return CEX_OK;
        if (rep.status != cexplain::MilpStatus::Optimal) return CEX_SOLVER_LIMIT;
        return CEX_VIOLATION;
    } catch (const std::exception& e) {
        t_error = e.what();
        return CEX_ERROR;
    }
}

cex_status cex_baseline(const cex_model* model, const char* target,
                        double lambda, const cex_options* opt, char** report) {
    clear_error();
    if (report) *report = nullptr;
    if (!model) {
        t_error = "null model";
        return CEX_ERROR;
    }
    try {
        const auto req = make_requirement(model, target, lambda);
        const cexplain::BaselineReport rep = cexplain::run_baseline(
            model->file.mdp, req, to_pipeline(model, opt));
        if (report)
            *report = dup_string(cexplain::render_baseline_report(
                model->file.mdp, rep, machine(opt), model->digest));
        if (!rep.violated) return CEX_OK;
        if (rep.status != cexplain::MilpStatus::Optimal) return CEX_SOLVER_LIMIT;
        return CEX_VIOLATION;
    } catch (const std::exception& e) {
        t_error = e.what();
        return CEX_ERROR;
    }
}

cex_status cex_export_lp(const cex_model* model, const char* target,
                         double lambda, const char* encoding,
                         const cex_options* opt, char** text) {
    clear_error();
    if (text) *text = nullptr;
    if (!model) {
        t_error = "null model";
        return CEX_ERROR;
    }
    try {
        const std::string enc = encoding ? encoding : "explain";
        bool explanation = true;
        if (enc == "explain") {
            explanation = true;
        } else if (enc == "minstate") {
            explanation = false;
        } else {
            throw std::invalid_argument("unknown encoding '" + enc +
                                        "' (expected explain or minstate)");
        }
        const auto req = make_requirement(model, target, lambda);
        const std::string lp = cexplain::export_encoding_lp(
            model->file.mdp, req, explanation, to_pipeline(model, opt));
        if (text) *text = dup_string(lp);
        return CEX_OK;
    } catch (const std::exception& e) {
        t_error = e.what();
        return CEX_ERROR;
    }
}

cex_status cex_series(const int* ns, size_t count, double lambda,
                      const cex_options* opt, char** table) {
    clear_error();
    if (table) *table = nullptr;
    if (!ns || count == 0) {
        t_error = "no side lengths given";
        return CEX_ERROR;
    }
    try {
        std::vector<cexplain::SeriesRow> rows;
        for (size_t i = 0; i < count; ++i)
            rows.push_back(cexplain::run_series_row(
                ns[i], lambda, to_pipeline(nullptr, opt)));
        if (table) *table = dup_string(cexplain::render_series(rows));
        return CEX_OK;
    } catch (const std::exception& e) {
        t_error = e.what();
        return CEX_ERROR;
    }
}

const char* cex_last_error(void) { return t_error.c_str(); }

void cex_string_free(char* s) { std::free(s); }

}  // extern "C"
