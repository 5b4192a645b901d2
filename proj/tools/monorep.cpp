#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "monorep/specfile.hpp"

// Batch front end: load a problem spec, run its tasks, write a report and
// any surface dumps into the output directory.
//
// Exit codes: 0 all tasks passed, 1 some task FAILS/ERROR, 2 resolution-
// limited POSSIBLE_FAIL only, 64 spec parse error, 65 unresolved name.

int main(int argc, char** argv) {
    CLI::App app{"representative-function check runner"};
    app.require_subcommand(1);

    std::string spec_path, out_dir = ".";
    double resolution = -1.0, tol = -1.0;
    unsigned seed = 0;
    CLI::App* run = app.add_subcommand("run", "run every task in a spec file");
    run->add_option("spec", spec_path, "problem spec file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");
    run->add_option("--resolution", resolution, "override every probe resolution");
    run->add_option("--tol", tol, "override every probe tolerance");
    run->add_option("--seed", seed, "random seed (recorded, currently unused)");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(spec_path);
    if (!in) {
        std::cerr << "cannot open spec file: " << spec_path << "\n";
        return 64;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    try {
        monorep::ProblemSpec spec = monorep::parse_problem_spec(buf.str());
        std::filesystem::create_directories(out_dir);
        monorep::RunOptions opts;
        if (resolution > 0.0) opts.resolution = resolution;
        if (tol > 0.0) opts.tol = tol;
        opts.seed = seed;
        int rc = monorep::run_spec(spec, out_dir, opts);
        std::cout << "report written to " << out_dir << "/report.txt\n";
        return rc;
    } catch (const monorep::SpecParseError& e) {
        std::cerr << e.what() << "\n";
        return 64;
    } catch (const monorep::SpecNameError& e) {
        std::cerr << e.what() << "\n";
        return 65;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
