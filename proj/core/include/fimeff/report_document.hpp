// fimeff/report_document.hpp — flat, ordered key→value document used for
// every report the CLI emits.
//
// Wire format, one entry per line:
//
//   schema_version = "1"
//   report.eta = 1.0
//   report.d_eff = 4
//   config.seed = 1
//
// Values are typed by shape: quoted strings (with \" \\ \n escapes),
// true/false booleans, bare integers, and reals. Reals are written with 17
// significant digits (plus a ".0" marker when the digits alone would read
// as an integer), so parse(serialize(x)) reproduces every double bit for
// bit; "inf", "-inf" and "nan" are legal reals.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace fimeff::io {

class ReportDocument {
public:
    using Value = std::variant<bool, std::int64_t, double, std::string>;
    using Entry = std::pair<std::string, Value>;

    // Appends an entry; keys are restricted to [A-Za-z0-9_.-]+ and need
    // not be unique (lists use indexed keys like "spectrum.0").
    void add(std::string_view key, Value value);

    void add_bool(std::string_view key, bool v) { add(key, Value(v)); }
    void add_int(std::string_view key, std::int64_t v) { add(key, Value(v)); }
    void add_real(std::string_view key, double v) { add(key, Value(v)); }
    void add_string(std::string_view key, std::string v) { add(key, Value(std::move(v))); }

    const std::vector<Entry>& entries() const noexcept { return entries_; }

    // First value stored under `key`, if any.
    const Value* find(std::string_view key) const;
    std::optional<double> find_real(std::string_view key) const;

    std::string serialize() const;
    static ReportDocument parse(std::string_view text);

    bool operator==(const ReportDocument&) const = default;

private:
    std::vector<Entry> entries_;
};

// 17-significant-digit decimal rendering that from_chars recovers exactly.
std::string format_real(double value);

} // namespace fimeff::io
