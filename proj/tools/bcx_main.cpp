#include "bcx/driver.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Exact toolkit for weakly toric monoids, model spaces and "
                 "b-complex structures"};
    app.require_subcommand(1);

    bcx::JobSpec job;

    struct CommandDef {
        const char* name;
        const char* help;
        bool uses_j;    // builds a complex structure (sampling options)
        bool uses_order;
    };
    const CommandDef defs[] = {
        {"monoid-analyze", "validate a monoid and enumerate its faces", false,
         false},
        {"embed", "binomial equations of the model space embedding", false,
         false},
        {"strata", "support face, depth and stratum dimension of points",
         false, false},
        {"bracket", "b-Lie brackets of the frame and its J-image", true,
         false},
        {"nijenhuis", "Nijenhuis tensor and integrability of J", true, false},
        {"dbar", "dbar residual orders of the holomorphic generators", true,
         false},
        {"normal-form", "verify the standard normal-form frame for J", true,
         false},
        {"nn-correct", "order-by-order holomorphic coordinate correction",
         true, true},
    };

    for (const CommandDef& d : defs) {
        CLI::App* sub = app.add_subcommand(d.name, d.help);
        sub->add_option("input", job.input_path, "input spec file")
            ->required();
        sub->add_flag("--json", job.json, "emit the JSON report");
        sub->add_option("--threads", job.threads,
                        "worker threads (reserved; default 1)");
        sub->add_option("--degree-cap", job.degree_cap,
                        "polynomial degree cap (default 16)");
        if (d.uses_j) {
            sub->add_option("--samples", job.samples,
                            "transversality samples per stratum (default 5)");
            sub->add_option("--seed", job.seed, "sampling seed (default 1)");
        }
        if (d.uses_order)
            sub->add_option("--order", job.order,
                            "truncation order N (default 4)");
        sub->callback([&job, &d] { job.command = d.name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    return bcx::run_cli(job, std::cout, std::cerr);
}
