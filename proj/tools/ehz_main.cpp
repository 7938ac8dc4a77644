#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ehz/run.hpp"

namespace {

ehz::Vec parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    ehz::Vec v(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) v(i) = vals[i];
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EHZ capacity of convex polytopes in H-representation"};
    app.require_subcommand(1);

    ehz::RunConfig cfg;
    std::vector<std::string> cut_normal_args;

    auto add_common = [&cfg](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--in", cfg.input, "input polytope JSON");
        if (needs_input) in->required();
        sub->add_option("--out", cfg.output, "write the JSON report here");
        sub->add_option("--exact-limit", cfg.exact_limit,
                        "largest facet count for exact search")
            ->check(CLI::Range(1, 12));
        sub->add_option("--workers", cfg.workers, "OpenMP thread count")
            ->envname("EHZ_WORKERS")
            ->check(CLI::Range(1, 256));
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--tol", cfg.tol, "comparison tolerance for property checks");
    };

    auto* cap = app.add_subcommand("capacity", "capacity of one polytope");
    add_common(cap, true);
    cap->add_option("--mode", cfg.mode, "exact|heuristic|symmetric|pruned")
        ->check(CLI::IsMember({"exact", "heuristic", "symmetric", "pruned"}));

    auto* sym = app.add_subcommand("symmetric", "capacity via the antipodal-pair search");
    add_common(sym, true);

    auto* pru = app.add_subcommand("pruned", "capacity via transition-graph cycles");
    add_common(pru, true);

    auto* orb = app.add_subcommand("orbit", "capacity plus verified orbit certificate");
    add_common(orb, true);
    orb->add_option("--mode", cfg.mode, "exact|symmetric|pruned")
        ->check(CLI::IsMember({"exact", "symmetric", "pruned"}));

    auto* cut = app.add_subcommand("cut-check", "subadditivity under hyperplane cuts");
    add_common(cut, true);
    cut->add_option("--mode", cfg.mode, "exact|pruned")
        ->check(CLI::IsMember({"exact", "pruned"}));
    cut->add_option("--cut-normal", cut_normal_args,
                    "cut plane normal as comma-separated coordinates (repeatable)");
    cut->add_option("--cut-offset", cfg.cut_offsets, "cut plane offset (repeatable)");
    cut->add_option("--samples", cfg.samples, "random center cuts when no plane given");

    auto* gen = app.add_subcommand("gen", "emit a generator polytope");
    gen->add_option("shape", cfg.shape, "cube|cross|simplex|random")
        ->required()
        ->check(CLI::IsMember({"cube", "cross", "simplex", "random"}));
    gen->add_option("--n", cfg.n, "half-dimension (polytope lives in R^{2n})")
        ->check(CLI::Range(1, 8));
    gen->add_option("--r", cfg.radius, "radius parameter");
    gen->add_option("--facets", cfg.facets, "point count for random hulls")
        ->check(CLI::Range(3, 64));
    gen->add_option("--seed", cfg.seed, "random seed");
    gen->add_option("--out", cfg.output, "output path")->required();

    auto* self = app.add_subcommand("selftest", "run the built-in invariant suite");
    self->add_flag("--quick", cfg.quick, "planar subset only");
    self->add_option("--inject", cfg.inject, "fault injection (omega-sign)")
        ->check(CLI::IsMember({"omega-sign"}));
    self->add_option("--workers", cfg.workers, "OpenMP thread count")
        ->envname("EHZ_WORKERS")
        ->check(CLI::Range(1, 256));

    CLI11_PARSE(app, argc, argv);

    cfg.command = app.get_subcommands().front()->get_name();
    for (const std::string& arg : cut_normal_args) {
        try {
            cfg.cut_normals.push_back(parse_vector(arg));
        } catch (const std::exception&) {
            std::cerr << "error: cannot parse --cut-normal '" << arg << "'\n";
            return 2;
        }
    }
    if (cfg.cut_normals.size() != cfg.cut_offsets.size()) {
        std::cerr << "error: --cut-normal and --cut-offset counts differ\n";
        return 2;
    }

    return ehz::run_command(cfg, std::cout, std::cerr);
}
