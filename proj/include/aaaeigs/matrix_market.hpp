// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "aaaeigs/common.hpp"

namespace aaaeigs
{

// Reads coordinate or array Matrix Market data (real, integer, complex or
// pattern; general, symmetric, hermitian or skew-symmetric). Symmetric storage
// is expanded. The result must be square.
Matrix read_matrix_market(std::istream &in, const std::string &source = "<stream>");
Matrix load_matrix(const std::filesystem::path &path);

// Writes coordinate format with 17 significant digits, using the real field
// when every entry is real. Reading the output back is bit-identical.
void write_matrix_market(std::ostream &out, const Matrix &a);
void save_matrix(const std::filesystem::path &path, const Matrix &a);

}  // namespace aaaeigs
