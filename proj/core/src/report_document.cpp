// fimeff/report_document.cpp

#include "fimeff/report_document.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "fimeff/errors.hpp"

namespace fimeff::io {

namespace {

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::string escape_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"':  out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default:   out += c;
        }
    }
    out += '"';
    return out;
}

std::string unescape_string(std::string_view body, std::size_t line_no) {
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] != '\\') {
            out += body[i];
            continue;
        }
        if (i + 1 >= body.size())
            throw ParseError("report: dangling escape", line_no, 0);
        const char next = body[++i];
        if (next == '"') out += '"';
        else if (next == '\\') out += '\\';
        else if (next == 'n') out += '\n';
        else throw ParseError("report: unknown escape sequence", line_no, 0);
    }
    return out;
}

bool looks_like_integer(std::string_view text) {
    if (text.empty()) return false;
    std::size_t start = text[0] == '-' ? 1 : 0;
    if (start == text.size()) return false;
    for (std::size_t i = start; i < text.size(); ++i)
        if (text[i] < '0' || text[i] > '9') return false;
    return true;
}

ReportDocument::Value parse_value(std::string_view text, std::size_t line_no) {
    if (!text.empty() && text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            throw ParseError("report: unterminated string", line_no, 0);
        return unescape_string(text.substr(1, text.size() - 2), line_no);
    }
    if (text == "true") return true;
    if (text == "false") return false;
    if (looks_like_integer(text)) {
        std::int64_t v = 0;
        const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
        if (r.ec == std::errc{} && r.ptr == text.data() + text.size()) return v;
        // fall through to double on overflow
    }
    double d = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), d);
    if (r.ec == std::errc{} && r.ptr == text.data() + text.size()) return d;
    throw ParseError("report: cannot parse value '" + std::string(text) + "'", line_no, 0);
}

} // namespace

std::string format_real(double value) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
    std::string out(buf, r.ptr);
    // Mark reals that would otherwise read back as integers.
    bool has_real_marker = false;
    for (char c : out)
        if (c == '.' || c == 'e' || c == 'n' || c == 'i') { has_real_marker = true; break; }
    if (!has_real_marker) out += ".0";
    return out;
}

void ReportDocument::add(std::string_view key, Value value) {
    if (!valid_key(key))
        throw InputError("ReportDocument: invalid key '" + std::string(key) + "'");
    entries_.emplace_back(std::string(key), std::move(value));
}

const ReportDocument::Value* ReportDocument::find(std::string_view key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return &v;
    return nullptr;
}

std::optional<double> ReportDocument::find_real(std::string_view key) const {
    const Value* v = find(key);
    if (v == nullptr) return std::nullopt;
    if (const double* d = std::get_if<double>(v)) return *d;
    if (const std::int64_t* i = std::get_if<std::int64_t>(v))
        return static_cast<double>(*i);
    return std::nullopt;
}

std::string ReportDocument::serialize() const {
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += key;
        out += " = ";
        if (const bool* b = std::get_if<bool>(&value)) {
            out += *b ? "true" : "false";
        } else if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) {
            out += std::to_string(*i);
        } else if (const double* d = std::get_if<double>(&value)) {
            out += format_real(*d);
        } else {
            out += escape_string(std::get<std::string>(value));
        }
        out += '\n';
    }
    return out;
}

ReportDocument ReportDocument::parse(std::string_view text) {
    ReportDocument doc;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (line.empty() || line.front() == '#') continue;
        const std::size_t sep = line.find(" = ");
        if (sep == std::string_view::npos)
            throw ParseError("report: missing ' = ' separator", line_no, 0);
        const std::string_view key = line.substr(0, sep);
        if (!valid_key(key))
            throw ParseError("report: invalid key '" + std::string(key) + "'", line_no, 0);
        doc.entries_.emplace_back(std::string(key),
                                  parse_value(line.substr(sep + 3), line_no));
    }
    return doc;
}

} // namespace fimeff::io
