// gdeltrecon: rebuild article text from GDELT Web News NGrams records.
//
//   gdeltrecon reconstruct [--config FILE] [flags] INPUT...   -> corpus NDJSON
//   gdeltrecon validate CORPUS REFERENCE [--table F] [--json F]
//   gdeltrecon shred REFERENCE OUTPUT [--mode all_occurrences|distinct_first]
//   gdeltrecon fetch --start T --end T --dest DIR

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gdeltrecon/errors.hpp"
#include "gdeltrecon/pipeline.hpp"

using namespace gdeltrecon;

namespace {

Timestamp parse_time_flag(const std::string& flag, const std::string& value) {
    auto ts = parse_timestamp(value);
    if (!ts) {
        throw ConfigError(flag + " expects an ISO-8601 UTC timestamp, got '" + value + "'");
    }
    return *ts;
}

int to_int(ExitCode code) { return static_cast<int>(code); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconstruct news article text from GDELT Web News NGrams records"};
    app.require_subcommand(1);

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "Reassemble articles from record files (NDJSON, optionally gzip)");
    std::string config_path;
    std::vector<std::string> inputs;
    std::string output;
    std::size_t min_overlap = 0;
    int pos_window = 0;
    std::size_t min_dup_run = 0;
    std::vector<std::string> langs;
    std::vector<std::string> url_include;
    std::vector<std::string> url_exclude;
    int workers = 1;
    std::string fetch_start;
    std::string fetch_end;
    std::string fetch_template;
    std::string fetch_dir;
    rec->add_option("--config", config_path, "JSON config file; flags override its values")->check(CLI::ExistingFile);
    rec->add_option("inputs", inputs, "Record files");
    rec->add_option("-o,--output", output, "Corpus output path (default: stdout)");
    auto* o_min_overlap = rec->add_option("--min-overlap", min_overlap, "Minimum word overlap for a merge");
    auto* o_pos_window = rec->add_option("--pos-window", pos_window, "Maximum pos distance for a merge");
    auto* o_min_dup = rec->add_option("--min-dup-run", min_dup_run, "Shortest adjacent duplicate run to collapse");
    auto* o_langs = rec->add_option("--langs", langs, "Language allow-list")->delimiter(',');
    auto* o_inc = rec->add_option("--url-include", url_include, "Keep only URLs matching one of these regexes");
    auto* o_exc = rec->add_option("--url-exclude", url_exclude, "Drop URLs matching any of these regexes");
    auto* o_workers = rec->add_option("-j,--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    auto* o_fstart = rec->add_option("--fetch-start", fetch_start, "Download window start (UTC)");
    auto* o_fend = rec->add_option("--fetch-end", fetch_end, "Download window end (UTC)");
    auto* o_ftmpl = rec->add_option("--fetch-template", fetch_template, "Download URL template");
    auto* o_fdir = rec->add_option("--fetch-dir", fetch_dir, "Download directory");

    // validate
    auto* val = app.add_subcommand("validate", "Score a reconstructed corpus against reference texts");
    std::string corpus_path;
    std::string reference_path;
    std::vector<double> thresholds = kDefaultJaccardThresholds;
    std::string table_out;
    std::string json_out;
    int val_workers = 1;
    val->add_option("corpus", corpus_path, "Reconstructed corpus NDJSON")->required()->check(CLI::ExistingFile);
    val->add_option("reference", reference_path, "Reference NDJSON of {url, text}")->required()->check(CLI::ExistingFile);
    val->add_option("--thresholds", thresholds, "Jaccard cutoffs for the filtered columns")->delimiter(',');
    val->add_option("--table", table_out, "Write the text table here");
    val->add_option("--json", json_out, "Write the JSON report here");
    val->add_option("-j,--workers", val_workers, "Worker threads")->check(CLI::PositiveNumber);

    // shred
    auto* shr = app.add_subcommand("shred", "Generate synthetic records from reference texts");
    std::string shred_in;
    std::string shred_out;
    ShredOptions shred_opts;
    std::string mode = "all_occurrences";
    shr->add_option("reference", shred_in, "Reference NDJSON of {url, text}")->required()->check(CLI::ExistingFile);
    shr->add_option("output", shred_out, "Records NDJSON output")->required();
    shr->add_option("--window", shred_opts.shred.window, "Context words on each side")->check(CLI::PositiveNumber);
    shr->add_option("--mode", mode, "all_occurrences or distinct_first");
    shr->add_option("--drop-rate", shred_opts.shred.drop_rate, "Fraction of records withheld")->check(CLI::Range(0.0, 0.999999));
    shr->add_option("--seed", shred_opts.shred.seed, "Seed for record dropping");
    shr->add_option("--lang", shred_opts.lang, "Language code written to each record");
    shr->add_flag("--gzip", shred_opts.gzip, "Compress the output");

    // fetch
    auto* fet = app.add_subcommand("fetch", "Download record files for a time window");
    std::string start_s;
    std::string end_s;
    FetchOptions fetch_opts;
    std::string dest;
    long long backoff_ms = 1000;
    fet->add_option("--start", start_s, "Window start, UTC")->required();
    fet->add_option("--end", end_s, "Window end, UTC")->required();
    fet->add_option("--template", fetch_opts.url_template, "URL template (%Y%m%d%H%M%S)");
    fet->add_option("--dest", dest, "Destination directory")->required();
    fet->add_option("--attempts", fetch_opts.max_attempts, "Attempts per file")->check(CLI::PositiveNumber);
    fet->add_option("--backoff-ms", backoff_ms, "Initial retry delay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; every other parse failure is a configuration error.
        return app.exit(e) == 0 ? to_int(ExitCode::ok) : to_int(ExitCode::config_error);
    }

    try {
        if (*rec) {
            RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
            if (!inputs.empty()) cfg.inputs.assign(inputs.begin(), inputs.end());
            if (!output.empty()) cfg.output = output;
            if (o_min_overlap->count()) cfg.assembly.min_overlap = min_overlap;
            if (o_pos_window->count()) cfg.assembly.pos_window = pos_window;
            if (o_min_dup->count()) cfg.assembly.min_dup_run = min_dup_run;
            if (o_langs->count()) cfg.languages = {langs.begin(), langs.end()};
            if (o_inc->count()) cfg.url_include = url_include;
            if (o_exc->count()) cfg.url_exclude = url_exclude;
            if (o_workers->count()) cfg.workers = workers;
            if (o_ftmpl->count()) cfg.fetch_template = fetch_template;
            if (o_fdir->count()) cfg.fetch_dir = fetch_dir;
            if (o_fstart->count() != o_fend->count()) {
                throw ConfigError("--fetch-start and --fetch-end go together");
            }
            if (o_fstart->count()) {
                cfg.fetch_window = FetchWindow{parse_time_flag("--fetch-start", fetch_start),
                                               parse_time_flag("--fetch-end", fetch_end)};
            }
            const RunSummary summary = reconstruct_command(cfg);
            for (const auto& s : summary.skipped) {
                std::cerr << "skipped " << s.url << ": " << s.reason << '\n';
            }
            std::cerr << summary.describe() << '\n';
        } else if (*val) {
            ValidateOptions opts;
            opts.thresholds = thresholds;
            opts.workers = val_workers;
            if (!table_out.empty()) opts.table_out = table_out;
            if (!json_out.empty()) opts.json_out = json_out;
            const SimilarityReport report = validate_command(corpus_path, reference_path, opts);
            std::cout << render_table(report);
        } else if (*shr) {
            shred_opts.shred.mode = parse_shred_mode(mode);
            const std::size_t n = shred_command(shred_in, shred_out, shred_opts);
            std::cerr << "wrote " << n << " records to " << shred_out << '\n';
        } else if (*fet) {
            fetch_opts.dest = dest;
            fetch_opts.initial_backoff = std::chrono::milliseconds(backoff_ms);
            const auto result =
                fetch_window(parse_time_flag("--start", start_s), parse_time_flag("--end", end_s), fetch_opts);
            for (const auto& f : result.files) std::cout << f.string() << '\n';
            std::cerr << "downloaded=" << result.files.size() << " missing=" << result.missing
                      << " failed=" << result.failed << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return to_int(ExitCode::config_error);
    } catch (const EmptyInputError& e) {
        std::cerr << "empty input: " << e.what() << '\n';
        return to_int(ExitCode::empty_input);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return to_int(ExitCode::io_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return to_int(ExitCode::failure);
    }
    return to_int(ExitCode::ok);
}
