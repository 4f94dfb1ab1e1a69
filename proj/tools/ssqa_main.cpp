// ssqa command-line front end. Talks to the analyzer only through the C API.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "ssqa/ssqa.h"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitFailure = 2;

struct OptionsDeleter {
    void operator()(ssqa_options* o) const { ssqa_options_destroy(o); }
};
struct ReportDeleter {
    void operator()(ssqa_report* r) const { ssqa_report_destroy(r); }
};
struct StringDeleter {
    void operator()(char* s) const { ssqa_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

int report_failure(const std::string& what) {
    std::cerr << "ssqa: " << what << ": " << ssqa_last_error() << "\n";
    return kExitFailure;
}

struct AnalyzeArgs {
    std::string path;
    std::string manifest;
    std::string config;
    std::string format = "text";
    std::string fail_on = "error";
    std::string rules;
    std::string dump_quotient;
};

int run_analyze(const AnalyzeArgs& args) {
    ssqa_options* raw_opts = nullptr;
    if (ssqa_options_create(&raw_opts) != SSQA_OK) return report_failure("options");
    std::unique_ptr<ssqa_options, OptionsDeleter> opts(raw_opts);

    if (!args.manifest.empty() && ssqa_options_set_manifest(opts.get(), args.manifest.c_str()) != SSQA_OK)
        return report_failure("manifest");
    if (!args.config.empty() && ssqa_options_set_config(opts.get(), args.config.c_str()) != SSQA_OK)
        return report_failure("config");
    if (!args.rules.empty() && ssqa_options_set_rules(opts.get(), args.rules.c_str()) != SSQA_OK)
        return report_failure("rules");

    ssqa_report* raw_report = nullptr;
    if (ssqa_analyze(args.path.c_str(), opts.get(), &raw_report) != SSQA_OK) {
        std::cerr << "ssqa: " << ssqa_last_error() << "\n";
        return kExitFailure;
    }
    std::unique_ptr<ssqa_report, ReportDeleter> report(raw_report);

    char* raw = nullptr;
    ssqa_status st = args.format == "json" ? ssqa_report_to_json(report.get(), &raw)
                                           : ssqa_report_to_text(report.get(), &raw);
    if (st != SSQA_OK) return report_failure("render");
    OwnedString rendered(raw);
    std::cout << rendered.get();
    std::cout.flush();

    if (!args.dump_quotient.empty()) {
        char* dot_raw = nullptr;
        if (ssqa_report_quotient_dot(report.get(), &dot_raw) != SSQA_OK) return report_failure("quotient");
        OwnedString dot(dot_raw);
        std::ofstream out(args.dump_quotient, std::ios::binary);
        out << dot.get();
        if (!out) {
            std::cerr << "ssqa: cannot write " << args.dump_quotient << "\n";
            return kExitFailure;
        }
    }

    ssqa_severity threshold = args.fail_on == "info" ? SSQA_INFO : args.fail_on == "warning" ? SSQA_WARNING : SSQA_ERROR;
    return ssqa_report_count(report.get(), threshold) > 0 ? kExitFindings : kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Static structure and information-flow analyzer for analytical spreadsheet models", "ssqa"};
    app.set_version_flag("--version", std::string(ssqa_version()));
    app.require_subcommand(1);

    AnalyzeArgs args;
    auto* analyze = app.add_subcommand("analyze", "Analyze one workbook (.xlsx, .xlsm, or fixture text)");
    analyze->add_option("path", args.path, "Workbook to analyze")->required();
    analyze->add_option("--manifest", args.manifest, "Module manifest; without one, modules are inferred");
    analyze->add_option("--config", args.config, "Analyzer config file (key = value)");
    analyze->add_option("--format", args.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    analyze->add_option("--fail-on", args.fail_on, "Lowest severity that makes the exit status 1")
        ->check(CLI::IsMember({"error", "warning", "info"}))
        ->capture_default_str();
    analyze->add_option("--rules", args.rules, "Comma-separated rule ids to run, e.g. R1,R6,R7");
    analyze->add_option("--dump-quotient", args.dump_quotient, "Write the module quotient graph as DOT");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFailure;
    }
    return run_analyze(args);
}
