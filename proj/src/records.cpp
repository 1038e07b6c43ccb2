#include "gdeltrecon/records.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>

#include "gdeltrecon/errors.hpp"
#include "gdeltrecon/gzip_stream.hpp"

namespace gdeltrecon {

using nlohmann::json;

ParseDiagnostics& ParseDiagnostics::operator+=(const ParseDiagnostics& other) {
    lines_read += other.lines_read;
    records_ok += other.records_ok;
    lines_malformed += other.lines_malformed;
    records_type2_skipped += other.records_type2_skipped;
    records_filtered += other.records_filtered;
    pos_clamped += other.pos_clamped;
    dates_unparsed += other.dates_unparsed;
    return *this;
}

FieldMapping FieldMapping::from_json(const json& j) {
    FieldMapping m;
    if (!j.is_object()) {
        throw ConfigError("field mapping must be a JSON object");
    }
    auto take = [&](const char* key, std::string& slot) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_string() || it->get<std::string>().empty()) {
                throw ConfigError(std::string("field mapping '") + key + "' must be a non-empty string");
            }
            slot = it->get<std::string>();
        }
    };
    take("date", m.date);
    take("ngram", m.ngram);
    take("lang", m.lang);
    take("type", m.lang_type);
    take("pos", m.pos);
    take("pre", m.pre);
    take("post", m.post);
    take("url", m.url);
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> known{"date", "ngram", "lang", "type", "pos", "pre", "post", "url"};
        if (!known.contains(key)) {
            throw ConfigError("unknown field mapping key '" + key + "'");
        }
    }
    return m;
}

RecordFilter::RecordFilter(std::set<std::string> languages, const std::vector<std::string>& url_include,
                           const std::vector<std::string>& url_exclude)
    : languages_(std::move(languages)) {
    auto compile = [](const std::string& pattern) {
        try {
            return std::regex(pattern, std::regex::ECMAScript | std::regex::optimize);
        } catch (const std::regex_error& e) {
            throw ConfigError("invalid URL pattern '" + pattern + "': " + e.what());
        }
    };
    for (const auto& p : url_include) include_.push_back(compile(p));
    for (const auto& p : url_exclude) exclude_.push_back(compile(p));
}

bool RecordFilter::accepts(const NgramRecord& record) const {
    if (!languages_.empty() && !languages_.contains(record.lang)) {
        return false;
    }
    if (!include_.empty()) {
        const bool any = std::any_of(include_.begin(), include_.end(),
                                     [&](const std::regex& re) { return std::regex_search(record.url, re); });
        if (!any) return false;
    }
    return std::none_of(exclude_.begin(), exclude_.end(),
                        [&](const std::regex& re) { return std::regex_search(record.url, re); });
}

namespace {

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Integral JSON number, or a float with an integral value.
std::optional<long long> as_integer(const json& v) {
    if (v.is_number_integer()) {
        return v.get<long long>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) {
            return static_cast<long long>(d);
        }
    }
    return std::nullopt;
}

const json* find_field(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    // Accepts YYYY-MM-DDTHH:MM:SS with optional fractional seconds and a trailing Z,
    // a space instead of T, or the compact YYYYMMDDHHMMSS form.
    std::string s(trim(text));
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    int consumed = 0;
    bool ok = false;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%*1[T ]%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &sec, &consumed) == 6) {
        std::string_view rest(s.c_str() + consumed);
        if (!rest.empty() && rest.front() == '.') {
            rest.remove_prefix(1);
            while (!rest.empty() && std::isdigit(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
        }
        ok = rest.empty() || rest == "Z" || rest == "+00:00";
    } else if (s.size() == 14 && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        ok = std::sscanf(s.c_str(), "%4d%2d%2d%2d%2d%2d", &y, &mo, &d, &h, &mi, &sec) == 6;
    }
    if (!ok || h > 23 || mi > 59 || sec > 60) {
        return std::nullopt;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{sec};
}

std::string format_timestamp(Timestamp ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const std::chrono::year_month_day ymd{day};
    const std::chrono::hh_mm_ss hms{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::optional<NgramRecord> parse_record_line(std::string_view line, const FieldMapping& fields, bool* pos_clamped,
                                             bool* date_unparsed) {
    json obj = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
        return std::nullopt;
    }

    const json* ngram = find_field(obj, fields.ngram);
    const json* url = find_field(obj, fields.url);
    const json* lang = find_field(obj, fields.lang);
    const json* type = find_field(obj, fields.lang_type);
    const json* pos = find_field(obj, fields.pos);
    if (!ngram || !url || !lang || !type || !pos) {
        return std::nullopt;
    }
    if (!ngram->is_string() || !url->is_string() || !lang->is_string()) {
        return std::nullopt;
    }

    NgramRecord r;
    r.ngram = ngram->get<std::string>();
    r.url = url->get<std::string>();
    r.lang = lang->get<std::string>();
    if (trim(r.ngram).empty() || trim(r.url).empty()) {
        return std::nullopt;
    }

    const auto type_value = as_integer(*type);
    if (!type_value || (*type_value != 1 && *type_value != 2)) {
        return std::nullopt;
    }
    r.lang_type = static_cast<int>(*type_value);

    const auto pos_value = as_integer(*pos);
    if (!pos_value) {
        return std::nullopt;
    }
    const long long clamped = std::clamp(*pos_value, 0LL, 100LL);
    if (pos_clamped) *pos_clamped = clamped != *pos_value;
    r.pos = static_cast<int>(clamped);

    for (auto [key, slot] : {std::pair{&fields.pre, &r.pre}, std::pair{&fields.post, &r.post}}) {
        if (const json* v = find_field(obj, *key); v && !v->is_null()) {
            if (!v->is_string()) return std::nullopt;
            *slot = v->get<std::string>();
        }
    }

    if (date_unparsed) *date_unparsed = false;
    if (const json* v = find_field(obj, fields.date); v && !v->is_null()) {
        if (v->is_string()) {
            r.date = parse_timestamp(v->get<std::string>());
        }
        if (!r.date && date_unparsed) *date_unparsed = true;
    }
    return r;
}

ParseResult parse_records(std::istream& in, const RecordFilter& filter, const FieldMapping& fields) {
    if (!in) {
        throw IoError("input stream is not readable");
    }
    ParseResult result;

    std::unique_ptr<GzipInputBuf> gz;
    std::unique_ptr<std::istream> gz_stream;
    std::istream* src = &in;
    if (starts_with_gzip_magic(in)) {
        gz = std::make_unique<GzipInputBuf>(in);
        gz_stream = std::make_unique<std::istream>(gz.get());
        gz_stream->exceptions(std::ios::badbit);
        src = gz_stream.get();
    }

    auto& diag = result.diagnostics;
    std::string line;
    try {
        while (std::getline(*src, line)) {
            if (is_blank(line)) {
                continue;
            }
            ++diag.lines_read;
            bool clamped = false;
            bool date_bad = false;
            auto record = parse_record_line(line, fields, &clamped, &date_bad);
            if (!record) {
                ++diag.lines_malformed;
                continue;
            }
            if (record->lang_type == 2) {
                ++diag.records_type2_skipped;
                continue;
            }
            if (!filter.accepts(*record)) {
                ++diag.records_filtered;
                continue;
            }
            diag.pos_clamped += clamped ? 1 : 0;
            diag.dates_unparsed += date_bad ? 1 : 0;
            ++diag.records_ok;
            result.records.push_back(std::move(*record));
        }
    } catch (const std::ios_base::failure& e) {
        throw IoError(std::string("read failure: ") + e.what());
    }
    if (in.bad()) {
        throw IoError("read failure on input stream");
    }
    return result;
}

ParseResult parse_records_file(const std::filesystem::path& path, const RecordFilter& filter,
                               const FieldMapping& fields) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        throw IoError("cannot open input file: " + path.string());
    }
    try {
        return parse_records(in, filter, fields);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

json record_to_json(const NgramRecord& record, const FieldMapping& fields) {
    json j;
    j[fields.date] = record.date ? json(format_timestamp(*record.date)) : json(nullptr);
    j[fields.ngram] = record.ngram;
    j[fields.lang] = record.lang;
    j[fields.lang_type] = record.lang_type;
    j[fields.pos] = record.pos;
    j[fields.pre] = record.pre;
    j[fields.post] = record.post;
    j[fields.url] = record.url;
    return j;
}

std::map<std::string, std::vector<NgramRecord>> group_by_url(std::vector<NgramRecord> records) {
    std::map<std::string, std::vector<NgramRecord>> groups;
    for (auto& r : records) {
        auto& bucket = groups[r.url];
        bucket.push_back(std::move(r));
    }
    return groups;
}

}  // namespace gdeltrecon
