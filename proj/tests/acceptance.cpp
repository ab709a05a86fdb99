// Acceptance gate: one line per criterion, exit code = number of failures.
// Every tolerance is written out at the comparison site.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "explain.hpp"
#include "lp_format.hpp"
#include "milp.hpp"
#include "pipeline.hpp"
#include "solver.hpp"
#include "templates.hpp"
#include "test_util.hpp"
#include "warehouse.hpp"

using namespace cexplain;
using namespace cexplain::testutil;

namespace {

struct Criterion {
    bool ok = true;
    std::string why;
    std::string note;
    void fail(const std::string& msg) {
        if (ok) {
            ok = false;
            why = msg;
        }
    }
};

double now_minus(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return std::string(buf);
}

// Identity vocabulary for models that do not ship one.
Vocabulary names_as_phrases(const Mdp& m) {
    Vocabulary v;
    v.action_phrases = m.action_names;
    v.prop_phrases = m.prop_names;
    return v;
}

// Soundness, completeness and the violation margin of one solved report.
void collect(Criterion& c3, const ExplainReport& rep, double lambda,
             double epsilon, const std::string& tag) {
    if (!rep.has_solution) {
        c3.fail(tag + ": no solution to check");
        return;
    }
    if (!rep.sound.ok)
        c3.fail(tag + ": sound check failed: " +
                (rep.sound.reasons.empty() ? "?" : rep.sound.reasons[0]));
    if (!rep.complete.ok)
        c3.fail(tag + ": complete check failed: " +
                (rep.complete.reasons.empty() ? "?" : rep.complete.reasons[0]));
    if (rep.cex.verified_probability < lambda + epsilon - 1e-8)
        c3.fail(tag + ": verified probability " +
                fmt(rep.cex.verified_probability) + " below threshold");
}

}  // namespace

int main() {
    Criterion c1, c2, c3, c4, c5, c6, c7;

    // C1: the nine-state mission grid has the known optimum: 9 continuous
    // variables, 11 selection and 60 sentence binaries, four sentences in
    // the documented order, a six-state baseline, all inside five seconds.
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const Mdp m = fixture_mdp();
        const Vocabulary v = fixture_vocab();
        const ReachabilityRequirement req = fixture_requirement();
        const ExplainReport rep = run_explain(m, v, req);
        const BaselineReport base = run_baseline(m, req);
        const double dt = now_minus(t0);

        if (rep.num_continuous != 9 || rep.num_theta != 11 || rep.num_mu != 60)
            c1.fail("variable counts " + std::to_string(rep.num_continuous) +
                    "/" + std::to_string(rep.num_theta) + "/" +
                    std::to_string(rep.num_mu) + " != 9/11/60");
        if (!rep.has_solution || std::llround(rep.objective) != 4)
            c1.fail("explain objective " + fmt(rep.objective) + " != 4");
        if (rep.cex.members != std::vector<int>{0, 3, 4, 6, 7, 8})
            c1.fail("members differ from {s1,s4,s5,s7,s8,s9}");
        const std::vector<int> expect_order = {16, 5, 39, 57};
        std::vector<int> got_order;
        for (const auto& line : rep.ordered) got_order.push_back(line.candidate);
        if (got_order != expect_order)
            c1.fail("sentence order differs from the documented one");
        if (!base.has_solution || std::llround(base.objective) != 6)
            c1.fail("baseline objective " + fmt(base.objective) + " != 6");
        if (dt >= 5.0) c1.fail("took " + fmt(dt) + "s (limit 5s)");
        collect(c3, rep, req.lambda, 1e-6, "fixture");
    } catch (const std::exception& e) {
        c1.fail(e.what());
    }

    // C2: on 100 random models the MILP optimum equals the brute-force
    // minimum exactly; C4: the state-minimal subsystem is never larger
    // than the explanation's.
    try {
        const auto t0 = std::chrono::steady_clock::now();
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const RandomModel rm = random_model(seed);
            const Vocabulary v = names_as_phrases(rm.mdp);
            const ExplainReport er = run_explain(rm.mdp, v, rm.req);
            if (er.status != MilpStatus::Optimal || !er.has_solution) {
                c2.fail("seed " + std::to_string(seed) + ": solver status " +
                        std::to_string((int)er.status));
                continue;
            }
            const auto candidates = enumerate_candidates(rm.mdp, 1);
            const int terminal = resolve_terminal_action(rm.mdp, "");
            const BruteForceResult bf = brute_force_min_explanation(
                rm.mdp, rm.req, candidates, 1e-6, er.describe_targets,
                terminal);
            if (!bf.feasible)
                c2.fail("seed " + std::to_string(seed) +
                        ": brute force found no feasible set");
            else if (std::llround(er.objective) != bf.min_sentences)
                c2.fail("seed " + std::to_string(seed) + ": objective " +
                        fmt(er.objective) + " != brute-force minimum " +
                        std::to_string(bf.min_sentences));
            collect(c3, er, rm.req.lambda, 1e-6,
                    "seed " + std::to_string(seed));

            const BaselineReport br = run_baseline(rm.mdp, rm.req);
            if (br.status != MilpStatus::Optimal || !br.has_solution)
                c4.fail("seed " + std::to_string(seed) +
                        ": baseline did not solve");
            else if (br.cex.members.size() > er.cex.members.size())
                c4.fail("seed " + std::to_string(seed) + ": baseline has " +
                        std::to_string(br.cex.members.size()) +
                        " members, explanation only " +
                        std::to_string(er.cex.members.size()));
        }
        const double dt = now_minus(t0);
        if (dt >= 300.0) c2.fail("took " + fmt(dt) + "s (limit 300s)");
        c2.note = "100 models, " + fmt(dt) + "s";
    } catch (const std::exception& e) {
        c2.fail(e.what());
        c4.fail("aborted with C2");
    }

    // C5: warehouse instances: n=10 (100 states) explained within 60
    // seconds with at most six sentences, n=20 within 10 minutes.
    try {
        const WarehouseInstance w10 = generate_warehouse(default_layout(10));
        PipelineOptions opt;
        opt.terminal_action = w10.mdp.action_names[w10.terminal_action];
        const ReachabilityRequirement req10 =
            ReachabilityRequirement::for_prop(w10.target_prop, 0.1);
        auto t0 = std::chrono::steady_clock::now();
        const ExplainReport r10 = run_explain(w10.mdp, w10.vocab, req10, opt);
        const double dt10 = now_minus(t0);
        if (!r10.has_solution)
            c5.fail("n=10: no solution (status " +
                    std::to_string((int)r10.status) + ")");
        else if (r10.ordered.size() > 6)
            c5.fail("n=10: " + std::to_string(r10.ordered.size()) +
                    " sentences (limit 6)");
        if (dt10 >= 60.0) c5.fail("n=10 took " + fmt(dt10) + "s (limit 60s)");
        if (r10.has_solution) collect(c3, r10, 0.1, 1e-6, "warehouse n=10");

        const WarehouseInstance w20 = generate_warehouse(default_layout(20));
        PipelineOptions opt20;
        opt20.terminal_action = w20.mdp.action_names[w20.terminal_action];
        const ReachabilityRequirement req20 =
            ReachabilityRequirement::for_prop(w20.target_prop, 0.1);
        t0 = std::chrono::steady_clock::now();
        const ExplainReport r20 = run_explain(w20.mdp, w20.vocab, req20, opt20);
        const double dt20 = now_minus(t0);
        if (!r20.has_solution)
            c5.fail("n=20: no solution (status " +
                    std::to_string((int)r20.status) + ")");
        if (dt20 >= 600.0)
            c5.fail("n=20 took " + fmt(dt20) + "s (limit 600s)");
        if (r20.has_solution) collect(c3, r20, 0.1, 1e-6, "warehouse n=20");
        c5.note = "n=10 " + fmt(dt10) + "s, n=20 " + fmt(dt20) + "s";
    } catch (const std::exception& e) {
        c5.fail(e.what());
    }

    // C6: LP-format round trip: exported encodings parse back to programs
    // whose optimum matches the in-memory one to 1e-9.
    try {
        struct Case {
            std::string tag;
            Mdp m;
            ReachabilityRequirement req;
        };
        std::vector<Case> cases;
        cases.push_back({"fixture", fixture_mdp(), fixture_requirement()});
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const RandomModel rm = random_model(seed);
            cases.push_back({"seed " + std::to_string(seed), rm.mdp, rm.req});
        }
        for (const auto& cse : cases) {
            const auto candidates = enumerate_candidates(cse.m, 1);
            const std::vector<double> pmax =
                max_reach_probability(cse.m, cse.req);
            ExplanationMilpOptions mopt;
            mopt.terminal_action = resolve_terminal_action(cse.m, "");
            mopt.describe_targets = mopt.terminal_action >= 0;
            mopt.max_probs = &pmax;
            const MilpBuildResult build =
                build_explanation_milp(cse.m, cse.req, candidates, mopt);
            const MilpProblem parsed = parse_lp(export_lp(build.problem));
            const MilpSolution a = solve_milp(build.problem, {});
            const MilpSolution b = solve_milp(parsed, {});
            if (a.status != b.status) {
                c6.fail(cse.tag + ": statuses differ after the round trip");
                continue;
            }
            if (a.status != MilpStatus::Optimal) {
                c6.fail(cse.tag + ": not solved to optimality");
                continue;
            }
            if (std::fabs(a.objective - b.objective) >= 1e-9)
                c6.fail(cse.tag + ": optima differ by " +
                        fmt(std::fabs(a.objective - b.objective)));
        }
    } catch (const std::exception& e) {
        c6.fail(e.what());
    }

    // C7: the CLI's text reports are byte-identical across runs.
    try {
        const std::string model = data_path("mission3x3.model");
        const std::string f1 = "/tmp/cexplain_acceptance_run1.txt";
        const std::string f2 = "/tmp/cexplain_acceptance_run2.txt";
        const std::string base = std::string(CEXPLAIN_CLI_PATH) +
                                 " explain " + model +
                                 " --target in-human-zone --lambda 0.3 --out ";
        const int rc1 = std::system((base + f1 + " > /dev/null 2>&1").c_str());
        const int rc2 = std::system((base + f2 + " > /dev/null 2>&1").c_str());
        if (rc1 == -1 || rc2 == -1 || WEXITSTATUS(rc1) != 2 ||
            WEXITSTATUS(rc2) != 2) {
            c7.fail("cli exit codes " +
                    std::to_string(rc1 == -1 ? -1 : WEXITSTATUS(rc1)) + "/" +
                    std::to_string(rc2 == -1 ? -1 : WEXITSTATUS(rc2)) +
                    " != 2/2");
        } else {
            std::ifstream a(f1, std::ios::binary), b(f2, std::ios::binary);
            std::ostringstream sa, sb;
            sa << a.rdbuf();
            sb << b.rdbuf();
            if (sa.str().empty()) c7.fail("empty report");
            if (sa.str() != sb.str()) c7.fail("reports differ between runs");
        }
        std::remove(f1.c_str());
        std::remove(f2.c_str());
    } catch (const std::exception& e) {
        c7.fail(e.what());
    }

    const Criterion* all[] = {&c1, &c2, &c3, &c4, &c5, &c6, &c7};
    int failures = 0;
    for (int i = 0; i < 7; ++i) {
        if (all[i]->ok) {
            const std::string suffix =
                all[i]->note.empty() ? "" : " (" + all[i]->note + ")";
            std::printf("C%d: pass%s\n", i + 1, suffix.c_str());
        } else {
            std::printf("C%d: FAIL (%s)\n", i + 1, all[i]->why.c_str());
            ++failures;
        }
    }
    return failures;
}
