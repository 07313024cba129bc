#include <CLI11.hpp>

#include <iostream>

#include "saddle/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Saddle-point asymptotic expansions with a quadrature oracle"};
    app.require_subcommand(1);
    app.fallthrough();

    saddle::cli::Options options;
    std::string file;
    int order = -1;
    double tol = -1.0;
    std::string csv;

    app.add_option("--order", order, "Expansion order L")->check(CLI::NonNegativeNumber);
    app.add_option("--tol", tol, "Relative tolerance of the quadrature oracle")->check(CLI::PositiveNumber);
    app.add_option("--seed", options.seeds, "Extra Newton seed, e.g. \"x=0.1,y=-2\" (repeatable)");
    app.add_flag("--expect", options.check_expectations,
                 "Exit 0 iff the run matches the file's embedded expectations");

    auto* expand = app.add_subcommand("expand", "Print the per-point coefficient table");
    expand->add_option("file", file, "Problem file")->required();
    auto* verify = app.add_subcommand("verify", "Compare partial sums against quadrature on the lambda ladder");
    verify->add_option("file", file, "Problem file")->required();
    verify->add_option("--csv", csv, "Write the convergence table as CSV");
    auto* genfun = app.add_subcommand("genfun", "Coefficient asymptotics of 1/((1-w v1(z))(1-w v2(z)))");
    genfun->add_option("file", file, "Generating-function problem file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : saddle::cli::kInvalidInput;
    }
    if (order >= 0) options.order = order;
    if (tol > 0) options.tol = tol;
    if (!csv.empty()) options.csv_path = csv;

    if (*expand) return saddle::cli::run_expand(file, options, std::cout, std::cerr);
    if (*verify) return saddle::cli::run_verify(file, options, std::cout, std::cerr);
    return saddle::cli::run_genfun(file, options, std::cout, std::cerr);
}
