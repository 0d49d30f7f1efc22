#include "stepfit/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stepfit/cost.hpp"
#include "stepfit/generator.hpp"
#include "stepfit/io.hpp"
#include "stepfit/kstep.hpp"
#include "stepfit/oracle.hpp"

namespace stepfit {

namespace {

struct FitArgs {
    std::string input;
    std::size_t k = 0;  // 0: take k from the instance
    std::string model;  // empty: take model from the instance
    std::string engine = "prune";
    std::string format = "json";
    double tolerance = kDefaultTol;
    std::string out;
};

void apply_overrides(Instance& inst, const FitArgs& a) {
    if (a.k > 0) inst.k = a.k;
    if (a.model == "linear") inst.model = CostModel::Linear;
    if (a.model == "squared") inst.model = CostModel::Squared;
}

FitOutput run_fit(const Instance& inst, const std::string& engine) {
    FitReport report;
    if (engine == "oracle") {
        OracleFit of = oracle_k_step(inst.points, inst.k, inst.model);
        report.cost = of.cost;
        report.fit = std::move(of.fit);
    } else {
        report = k_step(inst.points, inst.k, inst.model);
    }
    return make_fit_output(inst, report, engine);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

int cmd_fit(const FitArgs& a) {
    Instance inst = load_instance(a.input);
    apply_overrides(inst, a);
    FitOutput out = run_fit(inst, a.engine);

    // Self-check: the delivered plan must actually achieve the reported cost.
    double achieved = set_cost(inst.points, StepFunction{out.segments}, inst.model);
    if (std::abs(achieved - out.cost) > a.tolerance * (1.0 + std::abs(out.cost))) {
        std::cerr << "fit self-check failed: reported " << out.cost
                  << " but plan achieves " << achieved << "\n";
        return 1;
    }

    if (a.format == "json")
        emit(fit_to_json(out), a.out);
    else if (a.format == "tsv")
        emit(fit_to_tsv(out), a.out);
    else if (a.format == "svg")
        emit(render_svg(out, inst), a.out);
    return 0;
}

int cmd_verify(const FitArgs& a) {
    Instance inst = load_instance(a.input);
    apply_overrides(inst, a);
    FitReport pr = k_step(inst.points, inst.k, inst.model);
    OracleFit of = oracle_k_step(inst.points, inst.k, inst.model);
    bool agree =
        std::abs(pr.cost - of.cost) <= a.tolerance * (1.0 + std::abs(of.cost));
    char line[160];
    std::snprintf(line, sizeof(line), "prune=%.17g oracle=%.17g %s\n", pr.cost,
                  of.cost, agree ? "agree" : "DISAGREE");
    std::cout << line;
    return agree ? 0 : 1;
}

int cmd_gen(const GenSpec& spec, std::size_t k, const std::string& out_path) {
    Instance inst;
    inst.points = generate_points(spec);
    inst.k = k;
    emit(instance_to_csv(inst), out_path);
    return 0;
}

int cmd_bench(std::size_t k, const std::string& sizes_csv, std::uint64_t seed,
              std::size_t trials) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(sizes_csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) sizes.push_back(std::stoull(tok));
    if (sizes.empty()) {
        std::cerr << "bench: no sizes given\n";
        return 1;
    }
    if (trials == 0) trials = 1;

    std::vector<double> medians;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        std::vector<double> walls;
        for (std::size_t t = 0; t < trials; ++t) {
            GenSpec spec;
            spec.n = sizes[si];
            spec.k = k;
            spec.seed = seed + 1000003ULL * si + t;
            std::vector<WeightedPoint> pts = generate_points(spec);
            auto t0 = std::chrono::steady_clock::now();
            FitReport rep = k_step(pts, k);
            auto t1 = std::chrono::steady_clock::now();
            (void)rep;
            walls.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        std::sort(walls.begin(), walls.end());
        double med = walls[walls.size() / 2];
        medians.push_back(med);
        char line[160];
        if (si == 0)
            std::snprintf(line, sizeof(line), "n=%zu median_ms=%.3f\n", sizes[si],
                          med);
        else
            std::snprintf(line, sizeof(line), "n=%zu median_ms=%.3f ratio=%.3f\n",
                          sizes[si], med,
                          medians[si - 1] > 0.0 ? med / medians[si - 1] : 0.0);
        std::cout << line;
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"k-step minimax fitting of weighted planar points"};
    app.require_subcommand(1);

    FitArgs fa;
    CLI::App* fit = app.add_subcommand("fit", "fit a k-step function");
    fit->add_option("input,--input", fa.input, "instance file (csv or json)")
        ->required();
    fit->add_option("--k", fa.k, "number of steps (overrides instance)");
    fit->add_option("--model", fa.model, "cost model")
        ->check(CLI::IsMember({"linear", "squared"}));
    fit->add_option("--engine", fa.engine, "solver engine")
        ->check(CLI::IsMember({"prune", "oracle"}));
    fit->add_option("--format", fa.format, "output format")
        ->check(CLI::IsMember({"json", "tsv", "svg"}));
    fit->add_option("--tolerance", fa.tolerance, "self-check tolerance");
    fit->add_option("--out", fa.out, "output path (default stdout)");

    FitArgs va;
    CLI::App* verify = app.add_subcommand("verify", "compare both engines");
    verify->add_option("input,--input", va.input, "instance file (csv or json)")
        ->required();
    verify->add_option("--k", va.k, "number of steps (overrides instance)");
    verify->add_option("--model", va.model, "cost model")
        ->check(CLI::IsMember({"linear", "squared"}));
    verify->add_option("--tolerance", va.tolerance, "agreement tolerance");

    GenSpec gs;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a CSV instance");
    gen->add_option("--n", gs.n, "point count")->required();
    gen->add_option("--k", gs.k, "step count used by structured profiles");
    gen->add_option("--seed", gs.seed, "PRNG seed")->required();
    gen->add_option("--weights", gs.weights, "weight distribution")
        ->check(CLI::IsMember({"uniform", "heavy"}));
    gen->add_option("--profile", gs.profile, "instance shape")
        ->check(CLI::IsMember({"random", "staircase", "adversarial"}));
    gen->add_option("--out", gen_out, "output path (default stdout)");

    std::size_t bk = 3, btrials = 5;
    std::uint64_t bseed = 1;
    std::string bsizes = "100000,200000,400000";
    CLI::App* bench = app.add_subcommand("bench", "time fits across sizes");
    bench->add_option("--k", bk, "number of steps");
    bench->add_option("--sizes", bsizes, "comma-separated point counts");
    bench->add_option("--seed", bseed, "PRNG seed");
    bench->add_option("--trials", btrials, "trials per size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (fit->parsed()) return cmd_fit(fa);
        if (verify->parsed()) return cmd_verify(va);
        if (gen->parsed()) return cmd_gen(gs, gs.k, gen_out);
        if (bench->parsed()) return cmd_bench(bk, bsizes, bseed, btrials);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace stepfit
