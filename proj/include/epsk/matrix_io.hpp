#ifndef EPSK_MATRIX_IO_HPP
#define EPSK_MATRIX_IO_HPP

#include <string>

#include "epsk/spectral.hpp"

namespace epsk {

// CSV: first line "rows,cols", then one comma-separated line per row
// (full double precision). Binary: magic "EPSK1", little-endian u64 rows
// and cols, then row-major little-endian f64 payload.

void write_matrix_csv(const Matrix& X, const std::string& path);
Matrix read_matrix_csv(const std::string& path);

void write_matrix_binary(const Matrix& X, const std::string& path);
Matrix read_matrix_binary(const std::string& path);

// Dispatch on extension: ".csv" -> CSV, anything else -> binary.
void write_matrix(const Matrix& X, const std::string& path);
Matrix read_matrix(const std::string& path);

}  // namespace epsk

#endif  // EPSK_MATRIX_IO_HPP
