#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maclane/driver.hpp"

namespace {

void add_common(CLI::App* cmd, maclane::ComputationRequest& request, std::string& format) {
    cmd->add_option("--max-degree,-k", request.max_degree, "highest homology degree to compute")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--budget", request.budget,
                    "maximum number of cube functions enumerated per degree (default 10^8)");
    cmd->add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--cache-dir", request.cache_dir,
                    "directory for cached bases and differentials (default: $MACLANE_CACHE_DIR)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MacLane homology of finite rings via the cubical construction"};
    app.require_subcommand(1);

    maclane::ComputationRequest request;
    request.cache_dir = maclane::default_cache_dir();
    std::string format = "text";

    auto* hml = app.add_subcommand("hml", "MacLane homology HML_*(R, M) in degrees 0..max-degree");
    hml->add_option("--ring,-r", request.ring_spec, "ring spec: Z/n or a ring table JSON file")->required();
    hml->add_option("--coefficients,-c", request.coefficients,
                    "bimodule: 'self' or a bimodule table JSON file (default self)");
    add_common(hml, request, format);

    auto* qh = app.add_subcommand("q-homology", "homology of the cubical complex Q(A)");
    qh->add_option("--group,-g", request.group_spec, "abelian group spec, e.g. \"Z/2 x Z/4\"")->required();
    add_common(qh, request, format);

    auto* add = app.add_subcommand("additivity", "check Q(U) (+) Q(V) -> Q(U (+) V) on homology");
    add->add_option("--left,-l", request.left_spec, "left group spec")->required();
    add->add_option("--right,-r", request.right_spec, "right group spec")->required();
    add_common(add, request, format);

    auto* self = app.add_subcommand("selftest", "run the structural invariant suite");
    add_common(self, request, format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (hml->parsed())
        request.command = maclane::Command::hml;
    else if (qh->parsed())
        request.command = maclane::Command::q_homology;
    else if (add->parsed())
        request.command = maclane::Command::additivity;
    else
        request.command = maclane::Command::selftest;
    request.format = format == "json" ? maclane::OutputFormat::json : maclane::OutputFormat::text;

    maclane::Report report = maclane::run(request);
    if (report.exit_code == maclane::exit_ok || report.exit_code == maclane::exit_failure)
        std::cout << report.body;
    else
        std::cerr << report.body;
    return report.exit_code;
}
