#include <iostream>

#include "commands.hpp"
#include "consrate/error.hpp"

int main(int argc, char** argv) {
    using namespace consrate::cli;
    CLI::App app{"Consensus convergence rates over random networks"};
    app.set_version_flag("--version", std::string(CONSRATE_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Context ctx;
    app.add_option("--threads", ctx.threads, "Worker threads for Monte-Carlo commands (0 = all cores)")
        ->capture_default_str();

    Runner run;
    add_rate(app, ctx, run);
    add_mincut(app, ctx, run);
    add_enumerate(app, ctx, run);
    add_simulate(app, ctx, run);
    add_detect(app, ctx, run);
    add_allocate(app, ctx, run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        return run ? run() : kUsage;
    } catch (const consrate::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const consrate::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kCapacity;
    } catch (const consrate::InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << '\n';
        return kInsufficientData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
