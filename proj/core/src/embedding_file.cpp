// fimeff/embedding_file.cpp

#include "fimeff/embedding_file.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "fimeff/report_document.hpp"

namespace fimeff::io {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

EmbeddingBatch parse_csv(const std::string& content, const std::string& path) {
    std::vector<double> values;
    std::size_t n = 0;
    std::size_t d = 0;

    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool header_allowed = true;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string::npos) end = content.size();
        std::string_view line = trim(std::string_view(content).substr(pos, end - pos));
        pos = end + 1;
        ++line_no;

        if (line.empty()) continue;
        if (line.front() == '#') {
            if (!header_allowed)
                throw ParseError(path + ": unexpected '#' row at line " +
                                     std::to_string(line_no),
                                 line_no, 0);
            header_allowed = false;
            continue;
        }
        header_allowed = false;

        std::size_t fields = 0;
        std::size_t field_start = 0;
        while (true) {
            std::size_t comma = line.find(',', field_start);
            std::string_view field =
                trim(line.substr(field_start, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - field_start));
            double value = 0.0;
            const auto r =
                std::from_chars(field.data(), field.data() + field.size(), value);
            if (field.empty() || r.ec != std::errc{} ||
                r.ptr != field.data() + field.size()) {
                throw ParseError(path + ": line " + std::to_string(line_no) +
                                     ": cannot parse field " + std::to_string(fields + 1) +
                                     " ('" + std::string(field) + "')",
                                 line_no, 0);
            }
            values.push_back(value);
            ++fields;
            if (comma == std::string_view::npos) break;
            field_start = comma + 1;
        }

        if (n == 0) {
            d = fields;
        } else if (fields != d) {
            throw ParseError(path + ": line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(d) + " fields, got " +
                                 std::to_string(fields),
                             line_no, 0);
        }
        ++n;
    }
    if (n == 0) throw ParseError(path + ": no data rows", line_no, 0);
    return EmbeddingBatch(Matrix(n, d, std::move(values)));
}

std::uint64_t read_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

void write_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

EmbeddingBatch parse_bin(const std::string& content, const std::string& path) {
    if (content.size() < 8 || std::memcmp(content.data(), kBinMagic, 8) != 0)
        throw ParseError(path + ": bad magic (expected FIMEFF01) at offset 0", 0, 0);
    if (content.size() < 24)
        throw ParseError(path + ": truncated header at offset " +
                             std::to_string(content.size()),
                         0, content.size());

    const auto* bytes = reinterpret_cast<const unsigned char*>(content.data());
    const std::uint64_t n = read_u64_le(bytes + 8);
    const std::uint64_t d = read_u64_le(bytes + 16);
    const std::uint64_t expected = 24 + n * d * 8;
    if (n == 0 || d == 0 || n * d > (1ULL << 32) || content.size() != expected) {
        throw ParseError(path + ": payload size " + std::to_string(content.size()) +
                             " does not match header n=" + std::to_string(n) +
                             " d=" + std::to_string(d) + " (expected " +
                             std::to_string(expected) + " bytes) at offset 24",
                         0, 24);
    }

    std::vector<double> values(n * d);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::uint64_t word = read_u64_le(bytes + 24 + i * 8);
        values[i] = std::bit_cast<double>(word);
    }
    return EmbeddingBatch(Matrix(n, d, std::move(values)));
}

} // namespace

EmbeddingFormat parse_format(const std::string& name) {
    if (name == "csv") return EmbeddingFormat::csv;
    if (name == "bin-f64") return EmbeddingFormat::bin_f64;
    throw UsageError("unknown format '" + name + "' (expected csv or bin-f64)");
}

std::string format_name(EmbeddingFormat format) {
    return format == EmbeddingFormat::csv ? "csv" : "bin-f64";
}

EmbeddingBatch read_embedding(const std::string& path, EmbeddingFormat format) {
    const std::string content = read_file(path);
    return format == EmbeddingFormat::csv ? parse_csv(content, path)
                                          : parse_bin(content, path);
}

void write_embedding(const std::string& path, const Matrix& rows, EmbeddingFormat format) {
    std::string out;
    if (format == EmbeddingFormat::csv) {
        for (std::size_t i = 0; i < rows.rows(); ++i) {
            for (std::size_t j = 0; j < rows.cols(); ++j) {
                if (j > 0) out += ',';
                out += format_real(rows(i, j));
            }
            out += '\n';
        }
    } else {
        out.assign(kBinMagic, 8);
        write_u64_le(out, rows.rows());
        write_u64_le(out, rows.cols());
        for (std::size_t i = 0; i < rows.rows(); ++i)
            for (std::size_t j = 0; j < rows.cols(); ++j)
                write_u64_le(out, std::bit_cast<std::uint64_t>(rows(i, j)));
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot open file for writing: " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw InputError("write failed: " + path);
}

} // namespace fimeff::io
