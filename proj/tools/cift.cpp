// cift — cloud and client artifact acquisition for Alexa-style ecosystems.
//
// The binary is a thin shell over the cift_core library: every operation the
// CLI performs is available as a library call with the same behavior. Multiple
// input operations may be combined in one invocation and run in the order
// given on the command line.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cift/cloud_acquirer.hpp"
#include "cift/error.hpp"
#include "cift/evidence_store.hpp"
#include "cift/export.hpp"
#include "cift/ingest.hpp"
#include "cift/normalizer.hpp"

namespace {

namespace fs = std::filesystem;
using cift::evidence::expand_user_path;

struct CliState {
    std::string case_dir = "~/.CIFT-Result/";
    cift::evidence::CaseDatabase casedb;
    int failures = 0;

    cift::evidence::CaseDatabase& ensure_case() {
        if (!casedb.valid()) {
            casedb = cift::evidence::CaseDatabase::init_case(expand_user_path(case_dir));
        }
        return casedb;
    }

    void run_correlation() {
        std::int64_t flagged = cift::normalize::correlate(ensure_case());
        std::cout << "correlation: " << flagged << " client-only event(s) flagged\n";
    }
};

void print_ingest_report(const char* label, const cift::ingest::IngestReport& report) {
    std::cout << label << " ingest summary\n" << report.to_text();
    for (const auto& diag : report.diagnostics) {
        std::cerr << label << ": " << diag << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cift — forensic acquisition and timeline toolkit for Alexa-style ecosystems"};
    app.set_version_flag("--version", "cift 1.0.0");
    app.require_subcommand(1, 0);

    CliState state;
    // Subcommand callbacks run immediately after their own parse, so the case
    // directory must be bound the moment the token is consumed.
    app.add_option("--case", state.case_dir, "Case directory (created on first use)")
        ->capture_default_str()
        ->trigger_on_parse();

    // ---- cloud ----------------------------------------------------------
    auto* cloud = app.add_subcommand("cloud", "Acquire cloud artifacts from the service API");
    auto cloud_opts = std::make_shared<cift::cloud::SessionOptions>();
    auto acquire_opts = std::make_shared<cift::cloud::AcquireOptions>();
    cloud->add_option("--base-url", cloud_opts->base_url, "Service base URL")->required();
    cloud->add_option("--skills-url", cloud_opts->skills_base_url,
                      "Skill-store base URL (default: base URL host)");
    auto* email_opt =
        cloud->add_option("--email", cloud_opts->email, "Account email (env CIFT_EMAIL)");
    auto* password_opt = cloud->add_option("--password", cloud_opts->password,
                                           "Account password (env CIFT_PASSWORD)");
    cloud->add_option("--cookie-file", cloud_opts->cookie_file,
                      "Import a browser session (name=value per line) instead of logging in");
    cloud->add_flag("--allow-insecure-http", cloud_opts->allow_insecure_http,
                    "Permit plain http:// to non-loopback hosts");
    cloud->add_option("--page-size", acquire_opts->page_size, "Page size for history endpoints")
        ->capture_default_str();
    cloud->add_option("--list-size", acquire_opts->list_size, "List size for to-do endpoints")
        ->capture_default_str();
    cloud->add_option("--parallel", acquire_opts->max_parallel,
                      "Concurrent fetches for independent endpoints")
        ->capture_default_str();
    cloud->immediate_callback();
    cloud->callback([&state, cloud_opts, acquire_opts, email_opt, password_opt]() {
        try {
            // Credential precedence: explicit flags, then environment, then a
            // cookie file. The password is held in memory only; it is never
            // written to the case database, any log, or any export.
            if (email_opt->count() == 0) {
                if (const char* env = std::getenv("CIFT_EMAIL")) cloud_opts->email = env;
            }
            if (password_opt->count() == 0) {
                if (const char* env = std::getenv("CIFT_PASSWORD")) cloud_opts->password = env;
            }
            const bool has_login = !cloud_opts->email.empty() && !cloud_opts->password.empty();
            if (has_login) cloud_opts->cookie_file.clear();
            if (!has_login && cloud_opts->cookie_file.empty()) {
                std::cerr << "cloud: no credentials: pass --email/--password, set "
                             "CIFT_EMAIL/CIFT_PASSWORD, or pass --cookie-file\n";
                state.failures++;
                return;
            }
            auto session = cift::cloud::create_session(*cloud_opts);
            if (!session.ok()) {
                std::cerr << "cloud: " << session.error().message << "\n";
                state.failures++;
                return;
            }
            auto& casedb = state.ensure_case();
            auto report = cift::cloud::acquire_all(session.value(), casedb, *acquire_opts);
            std::cout << report.to_text();
            for (const auto& endpoint : report.endpoints) {
                for (const auto& diag : endpoint.diagnostics) {
                    std::cerr << "cloud: " << endpoint.endpoint << ": " << diag << "\n";
                }
            }
            if (!report.all_ok()) {
                std::cerr << "cloud: one or more endpoints did not complete cleanly\n";
            }
            state.run_correlation();
        } catch (const cift::CaseError& e) {
            std::cerr << "cloud: " << e.what() << "\n";
            state.failures++;
        }
    });

    // ---- client-side ingestion ------------------------------------------
    struct IngestSpec {
        const char* name;
        const char* help;
        cift::Result<cift::ingest::IngestReport> (*run)(cift::evidence::CaseDatabase&,
                                                        const fs::path&);
    };
    static const IngestSpec kIngestSpecs[] = {
        {"app-android", "Parse an Android companion-app data directory",
         &cift::ingest::ingest_app_android},
        {"app-ios", "Parse an iOS companion-app container", &cift::ingest::ingest_app_ios},
        {"browser-chrome", "Parse a desktop Chrome cache directory",
         &cift::ingest::ingest_browser_chrome},
    };
    for (const auto& spec : kIngestSpecs) {
        auto* sub = app.add_subcommand(spec.name, spec.help);
        auto dir = std::make_shared<std::string>();
        sub->add_option("dir", *dir, "Input directory")->required();
        sub->immediate_callback();
        sub->callback([&state, &spec, dir]() {
            try {
                auto& casedb = state.ensure_case();
                auto report = spec.run(casedb, fs::path(*dir));
                if (!report.ok()) {
                    std::cerr << spec.name << ": " << report.error().message << "\n";
                    state.failures++;
                    return;
                }
                print_ingest_report(spec.name, report.value());
                state.run_correlation();
            } catch (const cift::CaseError& e) {
                std::cerr << spec.name << ": " << e.what() << "\n";
                state.failures++;
            }
        });
    }

    // ---- export ----------------------------------------------------------
    auto* export_cmd = app.add_subcommand("export", "Write the case timeline to a file");
    auto export_format = std::make_shared<std::string>();
    auto export_out = std::make_shared<std::string>();
    export_cmd->add_option("--format", *export_format, "Output format")
        ->required()
        ->check(CLI::IsMember({"l2t_csv", "jsonl"}));
    export_cmd->add_option("--out", *export_out, "Output file path")->required();
    export_cmd->immediate_callback();
    export_cmd->callback([&state, export_format, export_out]() {
        try {
            auto& casedb = state.ensure_case();
            fs::path out = expand_user_path(*export_out);
            auto rows = (*export_format == "l2t_csv")
                            ? cift::exporter::export_l2t_csv(casedb, out)
                            : cift::exporter::export_jsonl(casedb, out);
            if (!rows.ok()) {
                std::cerr << "export: " << rows.error().message << "\n";
                state.failures++;
                return;
            }
            std::cout << "export: wrote " << rows.value() << " row(s) as " << *export_format
                      << " to " << out.string() << "\n";
        } catch (const cift::CaseError& e) {
            std::cerr << "export: " << e.what() << "\n";
            state.failures++;
        }
    });

    // ---- verify ----------------------------------------------------------
    auto* verify_cmd =
        app.add_subcommand("verify", "Re-hash the evidence library and report tampering");
    verify_cmd->immediate_callback();
    verify_cmd->callback([&state]() {
        try {
            auto& casedb = state.ensure_case();
            auto violations = casedb.verify_evidence();
            if (violations.empty()) {
                std::cout << "verify: evidence library intact ("
                          << casedb.row_count("ACQUIRED_FILE") << " artifact(s))\n";
                return;
            }
            for (const auto& violation : violations) {
                const char* kind =
                    violation.kind == cift::evidence::ViolationKind::Missing ? "missing"
                                                                             : "hash mismatch";
                std::cerr << "verify: artifact " << violation.artifact_id << " " << kind << ": "
                          << violation.detail << "\n";
            }
            std::cout << "verify: " << violations.size() << " integrity violation(s)\n";
            state.failures++;
        } catch (const cift::CaseError& e) {
            std::cerr << "verify: " << e.what() << "\n";
            state.failures++;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage errors (unknown subcommand or flag) exit 2
    } catch (const std::exception& e) {
        std::cerr << "cift: " << e.what() << "\n";
        return 1;
    }
    return state.failures == 0 ? 0 : 1;
}
