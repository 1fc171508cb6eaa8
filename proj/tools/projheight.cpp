// projheight: heights on finite projective space and Cayley digraph audits.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "projheight/cli.hpp"

namespace cli = projheight::cli;

namespace {

int emit(int code, const cli::CommandResult& result, const std::string& error, projheight::Format format) {
    if (code == cli::kInputError || code == cli::kBudgetExceeded) {
        std::cerr << "error: " << error << '\n';
        return code;
    }
    std::cout << projheight::render(result.record, format);
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heights on P^(d-1)(F_p) and feedback arc sets of Cayley digraphs on F_p"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format_name = "text";
    app.add_option("--format", format_name, "Output format: text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    std::int64_t p = 0;
    std::int64_t pmin = 3, pmax = 0;
    std::vector<std::int64_t> coords, conn;
    std::size_t d = 2, k = 3;
    std::int64_t r = 1;
    std::string c_text = "0";
    std::uint64_t budget = projheight::kDefaultSpectrumBudget;
    bool paper_range = false, check_bounds = false, exact = false, css = false, girth = false;
    std::string out_path = "scan-report.json";
    std::string out_format = "json";

    auto* height = app.add_subcommand("height", "Height of one projective point");
    height->add_option("-p", p, "Prime modulus")->required();
    height->add_option("-a", coords, "Coordinates, comma separated")->required()->delimiter(',');

    auto* table = app.add_subcommand("table", "Heights of <1,a> for a in [2, p-2]");
    table->add_option("--pmin", pmin, "Smallest prime");
    table->add_option("--pmax", pmax, "Largest prime");
    table->add_flag("--paper-range", paper_range, "Primes 11, 13, 17, 19, 23, 29");

    auto* spectrum = app.add_subcommand("spectrum", "Height spectrum of P^(d-1)(F_p)");
    spectrum->add_option("-p", p, "Prime modulus")->required();
    spectrum->add_option("-d,--d", d, "Tuple length d");
    spectrum->add_flag("--check-bounds", check_bounds, "Check the maximum against its closed-form bounds");
    spectrum->add_option("--budget", budget, "Maximum number of points to enumerate");

    auto* gaps = app.add_subcommand("gaps", "Scan (p/(r+1) + c, p/r - c) for line heights");
    gaps->add_option("--pmin", pmin, "Smallest prime");
    gaps->add_option("--pmax", pmax, "Largest prime")->required();
    gaps->add_option("--r,-r", r, "Window index r >= 1");
    gaps->add_option("--c,-c", c_text, "Margin c >= 0, integer or a/b");
    gaps->add_option("--budget", budget, "Maximum number of points per prime");

    auto* cayley = app.add_subcommand("cayley", "Feedback arc set report for one Cayley digraph");
    cayley->add_option("-p", p, "Prime modulus")->required();
    cayley->add_option("-A", conn, "Connection set, comma separated")->required()->delimiter(',');
    cayley->add_flag("--exact", exact, "Compute the exact minimum feedback arc set");
    cayley->add_flag("--css", css, "Assert the CSS inequalities (exit 4 on failure)");
    cayley->add_flag("--girth", girth, "Compute the shortest directed cycle");

    auto* scan = app.add_subcommand("scan", "CSS audit over all connection sets of size d");
    scan->add_option("--pmax", pmax, "Largest prime")->required();
    scan->add_option("-d,--d", d, "Connection set size")->required();
    scan->add_flag("--exact", exact, "Compute exact beta for every instance");
    scan->add_option("--out", out_path, "Path of the full report");
    scan->add_option("--out-format", out_format, "Format of the full report: csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    scan->add_option("--budget", budget, "Maximum connection sets enumerated per prime");

    auto* kfree = app.add_subcommand("kfree", "Largest height over k-sum-free d-sets");
    kfree->add_option("-p", p, "Prime modulus")->required();
    kfree->add_option("-d,--d", d, "Set size")->required();
    kfree->add_option("-k", k, "Equation depth k")->required();
    kfree->add_option("--budget", budget, "Maximum sets enumerated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kInputError;
    }

    const auto format = projheight::parse_format(format_name);
    cli::CommandResult result;
    std::string error;
    int code = 0;

    if (*height) {
        code = cli::run_command([&] { return cli::cmd_height(p, coords); }, result, error);
    } else if (*table) {
        code = cli::run_command(
            [&] {
                if (paper_range) return cli::cmd_table_paper_range();
                if (pmax == 0) throw projheight::InputError("table: --pmax or --paper-range is required");
                return cli::cmd_table(pmin, pmax);
            },
            result, error);
    } else if (*spectrum) {
        code = cli::run_command([&] { return cli::cmd_spectrum(p, d, check_bounds, budget); }, result, error);
    } else if (*gaps) {
        code = cli::run_command([&] { return cli::cmd_gaps(pmin, pmax, r, cli::parse_rational(c_text), budget); },
                                result, error);
    } else if (*cayley) {
        code = cli::run_command(
            [&] {
                return cli::cmd_cayley(p, conn, cli::CayleyFlags{exact, css, girth, cli::exact_cap_from_env()});
            },
            result, error);
    } else if (*kfree) {
        code = cli::run_command([&] { return cli::cmd_kfree(p, d, k, budget); }, result, error);
    } else if (*scan) {
        code = cli::run_command(
            [&] { return cli::cmd_scan(pmax, d, cli::ScanFlags{exact, cli::exact_cap_from_env(), budget}); }, result,
            error);
        if (code == cli::kSuccess || code == cli::kAssertionFailed) {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) {
                std::cerr << "error: cannot write " << out_path << '\n';
                return cli::kInputError;
            }
            file << projheight::render(result.record, projheight::parse_format(out_format));
            std::cout << projheight::render_summary(result.record, format);
            return code;
        }
    }
    return emit(code, result, error, format);
}
