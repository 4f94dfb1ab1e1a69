#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "ssqa/analyzer.hpp"
#include "ssqa/error.hpp"
#include "ssqa/report.hpp"
#include "ssqa/ssqa.h"

struct ssqa_options {
    std::optional<std::string> manifest;
    ssqa::AnalyzerConfig config;
    std::optional<std::set<ssqa::RuleId>> rules;
};

struct ssqa_report {
    ssqa::Analysis analysis;
    ssqa::OutputDocument doc;
};

namespace {

thread_local std::string last_error;

ssqa_status fail(ssqa_status status, const std::string& message) {
    last_error = message;
    return status;
}

// Runs fn, mapping exceptions to status codes.
template <typename Fn>
ssqa_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const ssqa::IngestError& e) {
        return fail(SSQA_ERR_INGEST, e.what());
    } catch (const ssqa::ManifestError& e) {
        return fail(SSQA_ERR_MANIFEST, e.what());
    } catch (const ssqa::ConfigError& e) {
        return fail(SSQA_ERR_CONFIG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(SSQA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SSQA_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SSQA_ERR_INTERNAL, "unknown failure");
    }
}

ssqa_status copy_out(const std::string& s, char** out) {
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (buf == nullptr) return fail(SSQA_ERR_INTERNAL, "out of memory");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
    return SSQA_OK;
}

}  // namespace

extern "C" {

const char* ssqa_version(void) { return SSQA_VERSION; }

const char* ssqa_last_error(void) { return last_error.c_str(); }

ssqa_status ssqa_options_create(ssqa_options** out) {
    if (out == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "out is NULL");
    return guarded([&] {
        *out = new ssqa_options();
        return SSQA_OK;
    });
}

void ssqa_options_destroy(ssqa_options* opts) { delete opts; }

ssqa_status ssqa_options_set_manifest(ssqa_options* opts, const char* path) {
    if (opts == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "options is NULL");
    return guarded([&] {
        opts->manifest = path ? std::optional<std::string>(path) : std::nullopt;
        return SSQA_OK;
    });
}

ssqa_status ssqa_options_set_config(ssqa_options* opts, const char* path) {
    if (opts == nullptr || path == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "options or path is NULL");
    return guarded([&] {
        opts->config = ssqa::load_config(path);
        return SSQA_OK;
    });
}

ssqa_status ssqa_options_set_rules(ssqa_options* opts, const char* rules) {
    if (opts == nullptr || rules == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "options or rules is NULL");
    return guarded([&] {
        opts->rules = ssqa::parse_rule_list(rules);
        return SSQA_OK;
    });
}

ssqa_status ssqa_analyze(const char* path, const ssqa_options* opts, ssqa_report** out) {
    if (path == nullptr || out == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "path or out is NULL");
    *out = nullptr;
    return guarded([&] {
        ssqa::AnalyzerConfig config = opts ? opts->config : ssqa::AnalyzerConfig{};
        std::optional<std::filesystem::path> manifest;
        if (opts) {
            if (opts->rules) config.enabled = *opts->rules;
            if (opts->manifest) manifest = *opts->manifest;
        }
        auto report = std::make_unique<ssqa_report>();
        report->analysis = ssqa::analyze_file(path, manifest, config);
        report->doc = ssqa::make_document(report->analysis);
        *out = report.release();
        return SSQA_OK;
    });
}

void ssqa_report_destroy(ssqa_report* report) { delete report; }

ssqa_status ssqa_report_to_json(const ssqa_report* report, char** out) {
    if (report == nullptr || out == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "report or out is NULL");
    return guarded([&] { return copy_out(ssqa::emit_json(report->doc), out); });
}

ssqa_status ssqa_report_to_text(const ssqa_report* report, char** out) {
    if (report == nullptr || out == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "report or out is NULL");
    return guarded([&] { return copy_out(ssqa::emit_text(report->doc), out); });
}

ssqa_status ssqa_report_quotient_dot(const ssqa_report* report, char** out) {
    if (report == nullptr || out == nullptr) return fail(SSQA_ERR_INVALID_ARGUMENT, "report or out is NULL");
    return guarded([&] { return copy_out(ssqa::quotient_to_dot(report->analysis.quotient), out); });
}

void ssqa_string_free(char* s) { std::free(s); }

size_t ssqa_report_count(const ssqa_report* report, ssqa_severity min_severity) {
    if (report == nullptr || min_severity < SSQA_INFO || min_severity > SSQA_ERROR) return 0;
    return report->analysis.report.count(static_cast<ssqa::Severity>(min_severity));
}

int ssqa_report_score(const ssqa_report* report, ssqa_dimension dimension) {
    if (report == nullptr || dimension < SSQA_SUITABLE_FOR_ANALYSIS || dimension > SSQA_MODIFIABLE) return -1;
    return report->analysis.report.score(static_cast<ssqa::Dimension>(dimension));
}

int ssqa_report_verdict_pass(const ssqa_report* report) {
    if (report == nullptr) return -1;
    return report->analysis.report.structured_design_pass ? 1 : 0;
}

int ssqa_report_analytical(const ssqa_report* report) {
    if (report == nullptr) return -1;
    return report->analysis.report.applicability.analytical ? 1 : 0;
}

}  // extern "C"
