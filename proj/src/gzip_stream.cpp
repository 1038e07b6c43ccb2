#include "gdeltrecon/gzip_stream.hpp"

#include <zlib.h>

#include <cstring>

#include "gdeltrecon/errors.hpp"

namespace gdeltrecon {

struct GzipInputBuf::State {
    z_stream zs{};
    bool initialized = false;
};

GzipInputBuf::GzipInputBuf(std::istream& source) : source_(source), state_(std::make_unique<State>()) {
    // 16 + MAX_WBITS: expect a gzip wrapper.
    if (inflateInit2(&state_->zs, 16 + MAX_WBITS) != Z_OK) {
        throw IoError("gzip: inflateInit2 failed");
    }
    state_->initialized = true;
    setg(out_buf_.data(), out_buf_.data(), out_buf_.data());
}

GzipInputBuf::~GzipInputBuf() {
    if (state_ && state_->initialized) {
        inflateEnd(&state_->zs);
    }
}

GzipInputBuf::int_type GzipInputBuf::underflow() {
    if (gptr() < egptr()) {
        return traits_type::to_int_type(*gptr());
    }
    z_stream& zs = state_->zs;
    while (!finished_) {
        if (zs.avail_in == 0) {
            source_.read(in_buf_.data(), static_cast<std::streamsize>(in_buf_.size()));
            const auto got = source_.gcount();
            if (got <= 0) {
                if (source_.bad()) {
                    throw IoError("gzip: read error on underlying stream");
                }
                // Clean EOF is only legal between members.
                if (zs.total_in != 0 || zs.total_out != 0) {
                    throw IoError("gzip: truncated stream");
                }
                finished_ = true;
                break;
            }
            zs.next_in = reinterpret_cast<Bytef*>(in_buf_.data());
            zs.avail_in = static_cast<uInt>(got);
        }
        zs.next_out = reinterpret_cast<Bytef*>(out_buf_.data());
        zs.avail_out = static_cast<uInt>(out_buf_.size());
        const int rc = inflate(&zs, Z_NO_FLUSH);
        const auto produced = out_buf_.size() - zs.avail_out;
        if (rc == Z_STREAM_END) {
            // Another member may follow.
            if (inflateReset(&zs) != Z_OK) {
                throw IoError("gzip: inflateReset failed");
            }
        } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
            throw IoError(std::string("gzip: corrupt data (") + (zs.msg ? zs.msg : "unknown") + ")");
        }
        if (produced > 0) {
            setg(out_buf_.data(), out_buf_.data(), out_buf_.data() + produced);
            return traits_type::to_int_type(*gptr());
        }
    }
    return traits_type::eof();
}

bool starts_with_gzip_magic(std::istream& in) {
    const auto first = in.peek();
    if (first != 0x1f) {
        return false;
    }
    in.get();
    const auto second = in.peek();
    in.unget();
    return second == 0x8b;
}

std::string gzip_compress(std::string_view data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw IoError("gzip: deflateInit2 failed");
    }
    std::string out;
    out.resize(deflateBound(&zs, static_cast<uLong>(data.size())) + 32);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) {
        throw IoError("gzip: deflate failed");
    }
    out.resize(zs.total_out);
    return out;
}

}  // namespace gdeltrecon
