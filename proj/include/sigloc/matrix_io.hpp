#pragma once

#include <iosfwd>
#include <string>

#include "sigloc/lattice.hpp"

namespace sigloc {

/// Coordinate-list matrix container, text and binary forms.
///
/// Text:
///   SigLocMatrix v1 text
///   dim <rows>
///   fiber <per-site orbital count>
///   hermitian <0|1>
///   ordering <descriptor, no spaces>
///   nnz <count>
///   <row> <col> <re> <im>        (0-based, %.17g, one entry per line)
///
/// Binary (little-endian):
///   magic "SLMB", u32 version=1, u64 dim, u32 fiber, u8 hermitian,
///   u8 pad[3], u32 desc_len, desc bytes, u64 nnz,
///   nnz x { u64 row, u64 col, f64 re, f64 im }
struct MatrixContainer {
  Eigen::Index dim = 0;
  int fiber = 1;
  bool hermitian = false;
  std::string ordering = "site-lex,orbital-minor";
  SparseCx mat;
};

MatrixContainer container_from(const OperatorMatrix& op);

void write_matrix_text(std::ostream& os, const MatrixContainer& m);
void write_matrix_binary(std::ostream& os, const MatrixContainer& m);
MatrixContainer read_matrix(std::istream& is);  // sniffs the form

void save_matrix(const std::string& path, const MatrixContainer& m,
                 bool binary);
MatrixContainer load_matrix(const std::string& path);

}  // namespace sigloc
