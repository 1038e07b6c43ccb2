#include "gdeltrecon/pipeline.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

#include "gdeltrecon/errors.hpp"
#include "gdeltrecon/fragments.hpp"
#include "gdeltrecon/gzip_stream.hpp"

namespace gdeltrecon {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Articles

nlohmann::ordered_json article_to_json(const ReconstructedArticle& a) {
    nlohmann::ordered_json j;
    j["url"] = a.url;
    j["lang"] = a.lang;
    j["date_first_seen"] = a.date_first_seen ? json(format_timestamp(*a.date_first_seen)) : json(nullptr);
    j["text"] = a.text;
    j["fragments_total"] = a.fragments_total;
    j["fragments_used"] = a.fragments_used;
    j["fragments_unanchored"] = a.fragments_unanchored;
    j["wraparound_applied"] = a.wraparound_applied;
    return j;
}

ReconstructedArticle article_from_json(const json& j) {
    ReconstructedArticle a;
    a.url = j.at("url").get<std::string>();
    a.text = j.at("text").get<std::string>();
    a.lang = j.value("lang", std::string());
    if (auto it = j.find("date_first_seen"); it != j.end() && it->is_string()) {
        a.date_first_seen = parse_timestamp(it->get<std::string>());
    }
    a.fragments_total = j.value("fragments_total", std::size_t{0});
    a.fragments_used = j.value("fragments_used", std::size_t{0});
    a.fragments_unanchored = j.value("fragments_unanchored", std::size_t{0});
    a.wraparound_applied = j.value("wraparound_applied", std::size_t{0});
    return a;
}

// ---------------------------------------------------------------------------
// Config

void RunConfig::validate() const {
    assembly.validate();
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    if (inputs.empty() && !fetch_window) {
        throw ConfigError("no input files and no fetch window given");
    }
    if (fetch_window && fetch_window->start > fetch_window->end) {
        throw ConfigError("fetch window start is after its end");
    }
    if (fetch_attempts < 1) {
        throw ConfigError("fetch attempts must be >= 1");
    }
}

RecordFilter RunConfig::make_filter() const { return RecordFilter(languages, url_include, url_exclude); }

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    RunConfig c;
    try {
        if (auto a = j.find("assembly"); a != j.end()) {
            c.assembly.min_overlap = a->value("min_overlap", c.assembly.min_overlap);
            c.assembly.pos_window = a->value("pos_window", c.assembly.pos_window);
            c.assembly.min_dup_run = a->value("min_dup_run", c.assembly.min_dup_run);
        }
        if (auto v = j.find("languages"); v != j.end()) {
            c.languages = v->get<std::set<std::string>>();
        }
        c.url_include = j.value("url_include", c.url_include);
        c.url_exclude = j.value("url_exclude", c.url_exclude);
        c.workers = j.value("workers", c.workers);
        if (auto v = j.find("inputs"); v != j.end()) {
            for (const auto& p : v->get<std::vector<std::string>>()) c.inputs.emplace_back(p);
        }
        if (auto v = j.find("output"); v != j.end()) c.output = v->get<std::string>();
        if (auto f = j.find("fetch"); f != j.end()) {
            c.fetch_template = f->value("template", c.fetch_template);
            if (auto d = f->find("dest"); d != f->end()) c.fetch_dir = d->get<std::string>();
            c.fetch_attempts = f->value("max_attempts", c.fetch_attempts);
            c.fetch_backoff = std::chrono::milliseconds(f->value("backoff_ms", c.fetch_backoff.count()));
            const bool has_start = f->contains("start");
            const bool has_end = f->contains("end");
            if (has_start != has_end) {
                throw ConfigError("fetch window needs both start and end");
            }
            if (has_start) {
                const auto start = parse_timestamp(f->at("start").get<std::string>());
                const auto end = parse_timestamp(f->at("end").get<std::string>());
                if (!start || !end) {
                    throw ConfigError("fetch window timestamps must be ISO-8601 UTC");
                }
                c.fetch_window = FetchWindow{*start, *end};
            }
        }
        if (auto v = j.find("fields"); v != j.end()) {
            c.fields = FieldMapping::from_json(*v);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw IoError("cannot open config file: " + path.string());
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw ConfigError("config file is not valid JSON: " + path.string());
    }
    return run_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Reconstruction

std::optional<ReconstructedArticle> reconstruct_article(const std::vector<NgramRecord>& records,
                                                        const AssemblyConfig& config) {
    if (records.empty()) {
        return std::nullopt;
    }
    ReconstructedArticle article;
    article.url = records.front().url;
    article.lang = records.front().lang;
    article.fragments_total = records.size();

    std::vector<Fragment> fragments;
    fragments.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.date && (!article.date_first_seen || *r.date < *article.date_first_seen)) {
            article.date_first_seen = r.date;
        }
        auto built = build_fragment(r, i);
        if (!built) continue;
        const std::size_t before = built->words.size();
        auto stripped = strip_wraparound_artifact(std::move(*built));
        if (!stripped || stripped->words.size() != before) {
            ++article.wraparound_applied;
        }
        if (stripped) fragments.push_back(std::move(*stripped));
    }
    if (fragments.empty()) {
        return std::nullopt;
    }

    const ArticleDraft draft = assemble(fragments, config);
    article.fragments_used = draft.fragments_used;
    article.fragments_unanchored = draft.fragments_unanchored;
    article.text = join_words(deduplicate(draft.words, config));
    return article;
}

namespace {

struct GroupOutcome {
    std::optional<ReconstructedArticle> article;
    std::optional<std::string> error;
};

GroupOutcome run_group(const std::vector<NgramRecord>& records, const AssemblyConfig& config) {
    GroupOutcome out;
    try {
        out.article = reconstruct_article(records, config);
        if (!out.article) out.error = "no fragment survived cleaning";
    } catch (const std::exception& e) {
        out.error = e.what();
    } catch (...) {
        out.error = "unknown error";
    }
    return out;
}

GroupResults collect(const UrlGroups& groups, std::vector<GroupOutcome>& outcomes) {
    GroupResults results;
    std::size_t i = 0;
    for (const auto& [url, _] : groups) {
        auto& o = outcomes[i++];
        if (o.article) {
            results.articles.push_back(std::move(*o.article));
        } else {
            results.skipped.push_back({url, o.error.value_or("skipped")});
        }
    }
    return results;
}

}  // namespace

GroupResults reconstruct_groups_serial(const UrlGroups& groups, const AssemblyConfig& config) {
    std::vector<GroupOutcome> outcomes;
    outcomes.reserve(groups.size());
    for (const auto& [_, records] : groups) outcomes.push_back(run_group(records, config));
    return collect(groups, outcomes);
}

GroupResults reconstruct_groups(const UrlGroups& groups, const AssemblyConfig& config, int workers) {
    std::vector<const std::vector<NgramRecord>*> work;
    work.reserve(groups.size());
    for (const auto& [_, records] : groups) work.push_back(&records);

    std::vector<GroupOutcome> outcomes(work.size());
    const auto n = static_cast<std::ptrdiff_t>(work.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(workers, 1))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        outcomes[static_cast<std::size_t>(i)] = run_group(*work[static_cast<std::size_t>(i)], config);
    }
    return collect(groups, outcomes);
}

// ---------------------------------------------------------------------------
// Files

void write_corpus(std::ostream& out, const std::vector<ReconstructedArticle>& articles) {
    for (const auto& a : articles) {
        out << article_to_json(a).dump() << '\n';
    }
}

namespace {

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        throw IoError("cannot open " + path.string());
    }
    std::unique_ptr<GzipInputBuf> gz;
    std::unique_ptr<std::istream> gz_stream;
    std::istream* src = &in;
    if (starts_with_gzip_magic(in)) {
        gz = std::make_unique<GzipInputBuf>(in);
        gz_stream = std::make_unique<std::istream>(gz.get());
        src = gz_stream.get();
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*src, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
        }
        try {
            fn(j);
        } catch (const json::exception& e) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (in.bad()) {
        throw IoError("read failure on " + path.string());
    }
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.is_open()) {
        throw IoError("cannot open output file: " + path.string());
    }
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write failure on " + path.string());
    }
}

}  // namespace

std::vector<ReconstructedArticle> read_corpus(const std::filesystem::path& path) {
    std::vector<ReconstructedArticle> out;
    for_each_json_line(path, [&](const json& j) { out.push_back(article_from_json(j)); });
    return out;
}

std::vector<ReferenceText> read_references(const std::filesystem::path& path) {
    std::vector<ReferenceText> out;
    for_each_json_line(path, [&](const json& j) {
        out.push_back({j.at("url").get<std::string>(), j.at("text").get<std::string>()});
    });
    return out;
}

// ---------------------------------------------------------------------------
// Commands

std::string RunSummary::describe() const {
    std::ostringstream s;
    s << "files=" << input_files << " lines=" << diagnostics.lines_read << " records=" << records
      << " malformed=" << diagnostics.lines_malformed << " type2_skipped=" << diagnostics.records_type2_skipped
      << " filtered=" << diagnostics.records_filtered << " pos_clamped=" << diagnostics.pos_clamped
      << " groups=" << groups << " articles=" << articles << " skipped=" << skipped.size()
      << " fragments=" << fragments_total << " unanchored=" << fragments_unanchored << " wall_ms=" << wall.count();
    return s.str();
}

RunSummary reconstruct_command(const RunConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    RunSummary summary;

    std::vector<std::filesystem::path> inputs = config.inputs;
    if (config.fetch_window) {
        FetchOptions fetch;
        fetch.url_template = config.fetch_template;
        fetch.dest = config.fetch_dir;
        fetch.max_attempts = config.fetch_attempts;
        fetch.initial_backoff = config.fetch_backoff;
        auto fetched = fetch_window(config.fetch_window->start, config.fetch_window->end, fetch);
        inputs.insert(inputs.end(), fetched.files.begin(), fetched.files.end());
    }
    summary.input_files = inputs.size();

    // Files parse independently; results are concatenated in the given order.
    const RecordFilter filter = config.make_filter();
    std::vector<ParseResult> parsed(inputs.size());
    std::vector<std::exception_ptr> errors(inputs.size());
    const auto n_inputs = static_cast<std::ptrdiff_t>(inputs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
    for (std::ptrdiff_t i = 0; i < n_inputs; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            parsed[k] = parse_records_file(inputs[k], filter, config.fields);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<NgramRecord> records;
    for (auto& p : parsed) {
        summary.diagnostics += p.diagnostics;
        std::move(p.records.begin(), p.records.end(), std::back_inserter(records));
    }
    summary.records = records.size();
    if (records.empty()) {
        throw EmptyInputError("no records left after parsing and filtering");
    }

    const UrlGroups groups = group_by_url(std::move(records));
    summary.groups = groups.size();
    GroupResults results = reconstruct_groups(groups, config.assembly, config.workers);
    summary.articles = results.articles.size();
    for (const auto& a : results.articles) {
        summary.fragments_total += a.fragments_total;
        summary.fragments_unanchored += a.fragments_unanchored;
    }
    summary.skipped = std::move(results.skipped);

    if (config.output.empty()) {
        write_corpus(std::cout, results.articles);
    } else {
        auto out = open_output(config.output);
        write_corpus(out, results.articles);
        finish_output(out, config.output);
    }
    summary.wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    return summary;
}

SimilarityReport validate_command(const std::filesystem::path& corpus, const std::filesystem::path& reference,
                                  const ValidateOptions& options) {
    const auto articles = read_corpus(corpus);
    const auto refs = read_references(reference);

    std::unordered_map<std::string, const ReferenceText*> by_url;
    for (const auto& r : refs) by_url.try_emplace(r.url, &r);

    std::vector<TextPair> pairs;
    std::set<std::string> matched_urls;
    std::set<std::string> left_urls;
    for (const auto& a : articles) {
        left_urls.insert(a.url);
        auto it = by_url.find(a.url);
        if (it == by_url.end() || !matched_urls.insert(a.url).second) continue;
        pairs.push_back({a.text, it->second->text, a.url});
    }
    std::set<std::string> right_urls;
    for (const auto& r : refs) right_urls.insert(r.url);

    SimilarityReport report = validate_corpus(pairs, options.thresholds, options.workers);
    report.matched = matched_urls.size();
    report.unmatched_left = left_urls.size() - matched_urls.size();
    report.unmatched_right = right_urls.size() - matched_urls.size();
    if (report.matched == 0) {
        std::cerr << "warning: no URLs matched between " << corpus.string() << " and " << reference.string() << '\n';
    }

    if (options.table_out) {
        auto out = open_output(*options.table_out);
        out << render_table(report);
        finish_output(out, *options.table_out);
    }
    if (options.json_out) {
        auto out = open_output(*options.json_out);
        out << render_json(report);
        finish_output(out, *options.json_out);
    }
    return report;
}

std::size_t shred_command(const std::filesystem::path& reference, const std::filesystem::path& output,
                          const ShredOptions& options) {
    options.shred.validate();
    const auto refs = read_references(reference);
    if (refs.empty()) {
        throw EmptyInputError("no reference texts in " + reference.string());
    }
    std::ostringstream buffer;
    std::size_t count = 0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        ShredConfig cfg = options.shred;
        cfg.seed = options.shred.seed + i;  // independent stream per article
        for (const auto& r : shred(refs[i].text, cfg, refs[i].url, options.lang)) {
            buffer << record_to_json(r).dump() << '\n';
            ++count;
        }
    }
    auto out = open_output(output);
    if (options.gzip) {
        out << gzip_compress(buffer.str());
    } else {
        out << buffer.str();
    }
    finish_output(out, output);
    return count;
}

}  // namespace gdeltrecon
