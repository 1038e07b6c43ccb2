#include "gdeltrecon/fetch.hpp"

#include <httplib.h>

#include <fstream>
#include <iostream>
#include <regex>
#include <thread>

#include "gdeltrecon/errors.hpp"

namespace gdeltrecon {

std::vector<Timestamp> fetch_ticks(Timestamp start, Timestamp end) {
    if (start > end) {
        throw ConfigError("fetch window start is after its end");
    }
    constexpr long long step = std::chrono::seconds(kTickInterval).count();
    auto since_epoch = [](Timestamp t) { return t.time_since_epoch().count(); };
    auto floor_div = [](long long a, long long b) { return a / b - ((a % b != 0) && (a < 0)); };
    const Timestamp lo{std::chrono::seconds(floor_div(since_epoch(start), step) * step)};
    const Timestamp hi{std::chrono::seconds(-floor_div(-since_epoch(end), step) * step)};

    std::vector<Timestamp> ticks;
    for (Timestamp t = lo; t <= hi; t += kTickInterval) ticks.push_back(t);
    return ticks;
}

std::string expand_template(std::string_view url_template, Timestamp tick) {
    const auto day = std::chrono::floor<std::chrono::days>(tick);
    const std::chrono::year_month_day ymd{day};
    const std::chrono::hh_mm_ss hms{tick - day};
    auto two = [](long long v) {
        std::string s = std::to_string(v);
        return s.size() < 2 ? "0" + s : s;
    };
    std::string out;
    for (std::size_t i = 0; i < url_template.size(); ++i) {
        const char c = url_template[i];
        if (c != '%' || i + 1 == url_template.size()) {
            out.push_back(c);
            continue;
        }
        switch (url_template[i + 1]) {
            case 'Y': out += std::to_string(static_cast<int>(ymd.year())); break;
            case 'm': out += two(static_cast<unsigned>(ymd.month())); break;
            case 'd': out += two(static_cast<unsigned>(ymd.day())); break;
            case 'H': out += two(hms.hours().count()); break;
            case 'M': out += two(hms.minutes().count()); break;
            case 'S': out += two(hms.seconds().count()); break;
            case '%': out.push_back('%'); break;
            default:
                out.push_back('%');
                out.push_back(url_template[i + 1]);
        }
        ++i;
    }
    return out;
}

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)", std::regex::icase);
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw ConfigError("fetch template does not expand to an http(s) URL: " + url);
    }
    return {m[1].str(), m[2].matched ? m[2].str() : std::string("/")};
}

std::string file_name_for(const SplitUrl& url, Timestamp tick) {
    std::string path = url.path;
    if (auto q = path.find('?'); q != std::string::npos) path.resize(q);
    auto slash = path.rfind('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    if (name.empty()) name = expand_template("%Y%m%d%H%M%S", tick) + ".ndjson";
    return name;
}

constexpr std::chrono::milliseconds kMaxBackoff{30000};

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

FetchResult fetch_window(Timestamp start, Timestamp end, const FetchOptions& options) {
    const auto ticks = fetch_ticks(start, end);
    std::function<void(const std::string&)> warn = options.warn;
    if (!warn) warn = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };

    std::error_code ec;
    std::filesystem::create_directories(options.dest, ec);
    if (ec || !std::filesystem::is_directory(options.dest)) {
        throw IoError("cannot create destination directory " + options.dest.string() +
                      (ec ? ": " + ec.message() : std::string()));
    }

    FetchResult result;
    for (const Timestamp tick : ticks) {
        const std::string url = expand_template(options.url_template, tick);
        const SplitUrl parts = split_url(url);

        httplib::Client client(parts.origin);
        client.set_follow_location(true);
        client.set_connection_timeout(options.timeout);
        client.set_read_timeout(options.timeout);

        const int max_attempts = std::max(options.max_attempts, 1);
        auto backoff = options.initial_backoff;
        bool done = false;
        for (int attempt = 1; attempt <= max_attempts && !done; ++attempt) {
            ++result.attempts;
            auto res = client.Get(parts.path);
            if (res && res->status == 200) {
                const auto target = options.dest / file_name_for(parts, tick);
                const auto partial = std::filesystem::path(target.string() + ".part");
                {
                    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
                    out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
                    if (!out) {
                        throw IoError("cannot write " + partial.string());
                    }
                }
                std::filesystem::rename(partial, target, ec);
                if (ec) {
                    throw IoError("cannot move " + partial.string() + " to " + target.string() + ": " + ec.message());
                }
                result.files.push_back(target);
                done = true;
            } else if (res && res->status == 404) {
                warn("missing (404): " + url);
                ++result.missing;
                done = true;
            } else if (res && !transient_status(res->status)) {
                warn("HTTP " + std::to_string(res->status) + " for " + url + ", skipping");
                ++result.failed;
                done = true;
            } else {
                const std::string why = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
                if (attempt == max_attempts) {
                    warn("giving up on " + url + " after " + std::to_string(attempt) + " attempts (" + why + ")");
                    ++result.failed;
                    done = true;
                } else {
                    std::this_thread::sleep_for(backoff);
                    backoff = std::min(backoff * 2, kMaxBackoff);
                }
            }
        }
    }
    if (result.files.empty()) {
        warn("no files downloaded for the requested window");
    }
    return result;
}

}  // namespace gdeltrecon
