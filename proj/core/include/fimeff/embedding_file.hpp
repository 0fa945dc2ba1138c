// fimeff/embedding_file.hpp — embedding matrix persistence.
//
// csv      n data rows of exactly d '.'-decimal reals separated by commas;
//          one optional leading header row starting with '#'. No locale
//          handling anywhere.
// bin-f64  magic "FIMEFF01" (8 ASCII bytes), then n and d as unsigned
//          64-bit little-endian, then n·d IEEE-754 binary64 little-endian
//          values in row-major order.

#pragma once

#include <string>

#include "fimeff/matrix.hpp"

namespace fimeff::io {

enum class EmbeddingFormat { csv, bin_f64 };

// "csv" / "bin-f64" names as they appear on the command line.
EmbeddingFormat parse_format(const std::string& name);
std::string format_name(EmbeddingFormat format);

inline constexpr char kBinMagic[8] = {'F', 'I', 'M', 'E', 'F', 'F', '0', '1'};

// Throws ParseError (with line or byte offset) on malformed content and
// InputError when the parsed matrix cannot form a batch (n < 2).
EmbeddingBatch read_embedding(const std::string& path, EmbeddingFormat format);

void write_embedding(const std::string& path, const Matrix& rows, EmbeddingFormat format);

} // namespace fimeff::io
