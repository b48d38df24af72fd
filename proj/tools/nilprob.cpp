// nilprob: exact and statistical nilpotence-degree computations over finite
// and coordinate-presented groups.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nilprob/cli_runner.hpp"

using nilprob::Report;
using nilprob::RunConfig;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", cfg.out_path, "Write the report to a file instead of stdout");
    cmd->add_option("--cap-order", cfg.cap_order, "Largest group order to materialize");
    cmd->add_option("--cap-evals", cfg.cap_evals, "Cap on exhaustive enumeration size");
    cmd->add_flag("--timing", cfg.timing, "Include wall-clock timing in the report");
}

int emit(const Report& rep, const RunConfig& cfg, int exit_code = 0) {
    std::string text = rep.render(cfg.format);
    if (cfg.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write to '" << cfg.out_path << "'\n";
            return 2;
        }
        f << text;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"degree-of-nilpotence computations on finite and coordinate groups"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* dc = app.add_subcommand("dc", "Exact dc^k of a finite group");
    dc->add_option("--group", cfg.group, "builtin:<name> or a group definition file")->required();
    dc->add_option("-k,--k", cfg.k, "Commutator depth k")->required();
    add_common(dc, cfg);

    CLI::App* pofg = app.add_subcommand("pofg", "Exact P^k(G, g) for a target element");
    pofg->add_option("--group", cfg.group)->required();
    pofg->add_option("-k,--k", cfg.k)->required();
    pofg->add_option("--target", cfg.target_spec, "Element label or #index")->required();
    add_common(pofg, cfg);

    CLI::App* dphi = app.add_subcommand("dphi", "Exact satisfaction fraction of an equation");
    dphi->add_option("--group", cfg.group)->required();
    dphi->add_option("--word", cfg.word_file, "Word file")->required();
    add_common(dphi, cfg);

    CLI::App* gal = app.add_subcommand("gallagher", "Quotient submultiplicativity and graph audit");
    gal->add_option("--group", cfg.group)->required();
    gal->add_option("--normal", cfg.normal_spec,
                    "center | derived | v4 | trivial | comma-separated elements")
        ->required();
    gal->add_option("-k,--k", cfg.k)->required();
    gal->add_flag("--full-audit", cfg.full_audit, "Run the full multigraph audit");
    gal->add_option("--seed", cfg.seed, "Seed for the randomized identity audit");
    add_common(gal, cfg);

    CLI::App* pg = app.add_subcommand("pgroup", "Block unitriangular p-group checks");
    pg->add_option("-p", cfg.p, "Odd prime")->required();
    pg->add_option("-k", cfg.k)->required();
    pg->add_option("-n", cfg.n)->required();
    pg->add_option("-r", cfg.r);
    pg->add_option("-s", cfg.s);
    pg->add_flag("--verify-all", cfg.verify_all, "Verify series, sharp subgroup and maximal audit");
    add_common(pg, cfg);

    int malcev_dc = -1;
    CLI::App* mal = app.add_subcommand("malcev", "Coordinate groups and their finite quotients");
    mal->add_option("--group", cfg.group, "heisenberg | ut4 | zn(m) | a malcev file")->required();
    mal->add_option("--quotient", cfg.quotient, "Quotient modulus n");
    mal->add_option("--dc", malcev_dc, "Also compute dc^k of the quotient");
    add_common(mal, cfg);

    CLI::App* root = app.add_subcommand("rootdensity", "Vanishing densities of a polynomial mod n");
    root->add_option("--poly", cfg.poly_file, "Polynomial file")->required();
    root->add_option("--primes", cfg.primes, "Moduli to evaluate")->required()->delimiter(',');
    root->add_option("--group", cfg.group, "Coordinate group providing n0 (default zn)");
    add_common(root, cfg);

    CLI::App* est = app.add_subcommand("estimate", "Monte Carlo estimators");
    est->add_option("--sampler", cfg.sampler_spec,
                    "walk:<group>:steps=<n> | box:<group>:side=<n>[:weights=..] | "
                    "ball:free<r>:radius=<n>")
        ->required();
    est->add_option("--dc", cfg.k, "Estimate dc^k")->required();
    est->add_option("--target", cfg.target_spec, "Estimate P^k at these coordinates instead");
    est->add_option("--trials", cfg.trials)->required();
    est->add_option("--seed", cfg.seed)->required();
    est->add_option("--grid", cfg.grid, "Sweep the sampler parameter: steps=50,100,200");
    add_common(est, cfg);

    CLI::App* gen = app.add_subcommand("generic", "Free-basis genericity experiment");
    gen->add_option("--rank", cfg.rank)->required();
    gen->add_option("--radius", cfg.radius);
    gen->add_option("--radii", cfg.radii, "Radius sweep")->delimiter(',');
    gen->add_option("--trials", cfg.trials)->required();
    gen->add_option("--seed", cfg.seed)->required();
    add_common(gen, cfg);

    CLI::App* acc = app.add_subcommand("acceptance", "Run the verification suite");
    acc->add_option("--only", cfg.only, "Criteria to run, by id or name")->delimiter(',');
    add_common(acc, cfg);

    CLI11_PARSE(app, argc, argv);

    cfg.seed_set = est->count("--seed") > 0 || gen->count("--seed") > 0 || gal->count("--seed") > 0;
    if (mal->parsed()) cfg.k = malcev_dc;
    for (CLI::App* sub : {dc, pofg, dphi, gal, pg, mal, root, est, gen, acc}) {
        if (sub->parsed()) cfg.command = sub->get_name();
    }

    try {
        Report rep = nilprob::run(cfg);
        if (cfg.command == "acceptance") {
            int failures = rep.body["results"]["failures"].get<int>();
            for (const auto& row : rep.body["results"]["criteria"]) {
                std::fprintf(stderr, "[%s] %2d %s: %s\n",
                             row["passed"].get<bool>() ? "PASS" : "FAIL", row["id"].get<int>(),
                             row["name"].get<std::string>().c_str(),
                             row["detail"].get<std::string>().c_str());
            }
            return emit(rep, cfg, failures == 0 ? 0 : 1);
        }
        return emit(rep, cfg);
    } catch (const nilprob::Error& e) {
        nilprob::Json err;
        err["command"] = cfg.command;
        err["error"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 2;
    }
}
