#ifndef PIDMD_MATRIX_IO_HPP
#define PIDMD_MATRIX_IO_HPP

#include <iosfwd>
#include <string>

#include "pidmd/types.hpp"

namespace pidmd {

// Complex CSV grammar: one matrix row per line, comma-separated tokens.
// A token is "a", "a+bi", "a-bi", or "bi" ("i" alone meaning 1i). Entries must
// be finite. Ragged rows and empty files are rejected.
Matrix load_matrix(std::istream& in);
Matrix load_matrix_file(const std::string& path);

// Writes entries with 17 significant digits so that load(save(M)) == M bitwise.
// Real entries are written without an imaginary part.
void save_matrix(std::ostream& out, const Matrix& m);
void save_matrix_file(const std::string& path, const Matrix& m);

std::string format_complex(cd z);
cd parse_complex(const std::string& token, std::size_t line, std::size_t column);

}  // namespace pidmd

#endif  // PIDMD_MATRIX_IO_HPP
