#include "gazecorr/embed_io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gazecorr/error.hpp"

namespace gazecorr {

namespace {

constexpr std::size_t kMaxWordBytes = 4096;

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

double parse_double(std::string_view token, const std::filesystem::path& path, std::size_t line) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw FormatError(path.string() + ":" + std::to_string(line) + ": cannot parse '" +
                          std::string(token) + "' as a number");
    }
    if (!std::isfinite(value)) {
        throw FormatError(path.string() + ":" + std::to_string(line) + ": non-finite value '" +
                          std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

struct Header {
    std::size_t count = 0;
    std::size_t dim = 0;
};

Header parse_header(std::string_view line, const std::filesystem::path& path) {
    const auto fields = split_spaces(line);
    auto fail = [&]() -> Header {
        throw FormatError(path.string() +
                          ":1: header must be '<vocab_count> <dimensionality>', got '" +
                          std::string(line) + "'");
    };
    if (fields.size() != 2) return fail();
    Header h;
    for (int k = 0; k < 2; ++k) {
        std::size_t v = 0;
        const auto tok = fields[static_cast<std::size_t>(k)];
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0) return fail();
        (k == 0 ? h.count : h.dim) = v;
    }
    return h;
}

void check_saveable(const VectorSpace& space, const std::filesystem::path& path) {
    if (space.size() == 0) {
        throw ConfigError("refusing to save empty vector space to '" + path.string() +
                          "': header would declare 0 words");
    }
    for (const auto& word : space.words()) {
        if (word.find_first_of(" \t\n\r") != std::string::npos) {
            throw FormatError("word '" + word + "' contains whitespace and cannot be serialized");
        }
    }
}

void format_double(std::string& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

} // namespace

VectorSpace load_text(const std::filesystem::path& path) {
    auto in = open_input(path, std::ios::in);

    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(path.string() + ":1: missing header line");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const Header header = parse_header(line, path);

    VectorSpace::Builder builder(header.dim, path.filename().string());
    DenseVector vec(header.dim);
    std::size_t line_no = 1;
    std::size_t loaded = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": empty line");
        }
        const auto fields = split_spaces(line);
        if (fields.size() != header.dim + 1) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(header.dim) + " values after the word, got " +
                              std::to_string(fields.size() - 1));
        }
        for (std::size_t i = 0; i < header.dim; ++i) {
            vec[i] = parse_double(fields[i + 1], path, line_no);
        }
        builder.add(std::string(fields[0]), vec);
        ++loaded;
        if (loaded > header.count) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": more vectors than the header's count of " +
                              std::to_string(header.count));
        }
    }
    if (loaded != header.count) {
        throw FormatError(path.string() + ": header declares " + std::to_string(header.count) +
                          " words but file contains " + std::to_string(loaded));
    }
    return std::move(builder).build();
}

void save_text(const VectorSpace& space, const std::filesystem::path& path) {
    check_saveable(space, path);
    auto out = open_output(path, std::ios::out | std::ios::trunc);

    std::string buf;
    buf.reserve(space.dimensionality() * 24 + 64);
    buf.append(std::to_string(space.size()));
    buf.push_back(' ');
    buf.append(std::to_string(space.dimensionality()));
    buf.push_back('\n');
    out << buf;

    for (std::size_t i = 0; i < space.size(); ++i) {
        buf.clear();
        buf.append(space.words()[i]);
        for (double v : space.vector_at(i)) {
            buf.push_back(' ');
            format_double(buf, v);
        }
        buf.push_back('\n');
        out << buf;
        if (!out) {
            throw FormatError("write failure on '" + path.string() + "'");
        }
    }
    out.flush();
    if (!out) {
        throw FormatError("write failure on '" + path.string() + "'");
    }
}

VectorSpace load_binary(const std::filesystem::path& path) {
    auto in = open_input(path, std::ios::in | std::ios::binary);

    std::string header_line;
    if (!std::getline(in, header_line)) {
        throw FormatError(path.string() + ":1: missing header line");
    }
    const Header header = parse_header(header_line, path);
    std::size_t offset = header_line.size() + 1;

    VectorSpace::Builder builder(header.dim, path.filename().string());
    std::vector<char> raw(header.dim * 4);
    DenseVector vec(header.dim);
    for (std::size_t record = 0; record < header.count; ++record) {
        // Tolerate newline separators left by some writers.
        int c = in.get();
        while (c == '\n') {
            ++offset;
            c = in.get();
        }
        std::string word;
        while (c != ' ') {
            if (c == std::char_traits<char>::eof()) {
                throw FormatError(path.string() + ": truncated record at byte offset " +
                                  std::to_string(offset + word.size()));
            }
            word.push_back(static_cast<char>(c));
            if (word.size() > kMaxWordBytes) {
                throw FormatError(path.string() + ": unterminated word at byte offset " +
                                  std::to_string(offset));
            }
            c = in.get();
        }
        offset += word.size() + 1;
        if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
            const auto got = static_cast<std::size_t>(in.gcount());
            throw FormatError(path.string() + ": truncated vector for word '" + word +
                              "' at byte offset " + std::to_string(offset + got));
        }
        for (std::size_t i = 0; i < header.dim; ++i) {
            const auto* b = reinterpret_cast<const unsigned char*>(raw.data() + i * 4);
            const std::uint32_t bits = static_cast<std::uint32_t>(b[0]) |
                                       static_cast<std::uint32_t>(b[1]) << 8 |
                                       static_cast<std::uint32_t>(b[2]) << 16 |
                                       static_cast<std::uint32_t>(b[3]) << 24;
            const float f = std::bit_cast<float>(bits);
            if (!std::isfinite(f)) {
                throw FormatError(path.string() + ": non-finite value for word '" + word +
                                  "' at byte offset " + std::to_string(offset + i * 4));
            }
            vec[i] = static_cast<double>(f);
        }
        offset += raw.size();
        builder.add(std::move(word), vec);
    }
    // Only newline padding may remain.
    int c = in.get();
    while (c == '\n') c = in.get();
    if (c != std::char_traits<char>::eof()) {
        throw FormatError(path.string() + ": trailing data after " + std::to_string(header.count) +
                          " records at byte offset " + std::to_string(offset));
    }
    return std::move(builder).build();
}

void save_binary(const VectorSpace& space, const std::filesystem::path& path) {
    check_saveable(space, path);
    auto out = open_output(path, std::ios::out | std::ios::trunc | std::ios::binary);

    out << space.size() << ' ' << space.dimensionality() << '\n';
    std::vector<char> raw(space.dimensionality() * 4);
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << space.words()[i] << ' ';
        const auto vec = space.vector_at(i);
        for (std::size_t j = 0; j < vec.size(); ++j) {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(vec[j]));
            raw[j * 4 + 0] = static_cast<char>(bits & 0xFF);
            raw[j * 4 + 1] = static_cast<char>((bits >> 8) & 0xFF);
            raw[j * 4 + 2] = static_cast<char>((bits >> 16) & 0xFF);
            raw[j * 4 + 3] = static_cast<char>((bits >> 24) & 0xFF);
        }
        out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
        out.put('\n');
        if (!out) {
            throw FormatError("write failure on '" + path.string() + "'");
        }
    }
    out.flush();
    if (!out) {
        throw FormatError("write failure on '" + path.string() + "'");
    }
}

std::optional<std::size_t> lookup(const VectorSpace& space, std::string_view word,
                                  const LookupPolicy& policy) {
    std::string key(word);
    if (policy.lowercase) {
        for (char& ch : key) {
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
    }
    if (auto idx = space.find(key)) return idx;
    for (const auto& tag : policy.pos_priority) {
        if (auto idx = space.find(key + "_" + tag)) return idx;
    }
    if (policy.fallback_any_suffix) {
        if (auto idx = space.first_with_prefix(key + "_")) return idx;
    }
    return std::nullopt;
}

} // namespace gazecorr
