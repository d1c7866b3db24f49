#include "relcost/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"relcost: reliable-delivery cost simulator and analyzer"};
    app.require_subcommand(1);

    relcost::CommandRequest request;
    std::uint64_t seed = 0;

    for (const char *name : {"simulate", "compare", "s2", "probe", "optimize"})
    {
        CLI::App *sub = app.add_subcommand(name);
        sub->add_option("--config", request.config, "experiment config (JSON)")->required();
        sub->add_option("--out", request.out, "output directory")->capture_default_str();
        sub->add_option("--seed-override", seed, "replace the config seed");
        sub->add_option("--jobs", request.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
        sub->callback([&request, sub, &seed] {
            request.command = sub->get_name();
            if (sub->count("--seed-override") > 0)
                request.seed_override = seed;
        });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : relcost::kExitConfigError;
    }
    return relcost::run_command(request, std::cout, std::cerr);
}
