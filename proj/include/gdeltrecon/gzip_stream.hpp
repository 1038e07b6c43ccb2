#pragma once

#include <array>
#include <istream>
#include <memory>
#include <streambuf>
#include <string>
#include <string_view>

namespace gdeltrecon {

/// Read-side streambuf that inflates a gzip (RFC 1952) byte stream taken from another istream.
/// Concatenated gzip members are decoded back to back. Throws IoError on corrupt data.
class GzipInputBuf : public std::streambuf {
public:
    explicit GzipInputBuf(std::istream& source);
    ~GzipInputBuf() override;

    GzipInputBuf(const GzipInputBuf&) = delete;
    GzipInputBuf& operator=(const GzipInputBuf&) = delete;

protected:
    int_type underflow() override;

private:
    struct State;
    std::istream& source_;
    std::unique_ptr<State> state_;
    std::array<char, 1 << 16> in_buf_{};
    std::array<char, 1 << 16> out_buf_{};
    bool finished_ = false;
};

/// True if the stream starts with the gzip magic bytes. Does not consume input.
bool starts_with_gzip_magic(std::istream& in);

std::string gzip_compress(std::string_view data);

}  // namespace gdeltrecon
