#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "anisodg/sparse.hpp"

namespace anisodg {

/// MatrixMarket `coordinate real general`, 1-based indices, 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

/// One value per line.
void write_vector(const std::filesystem::path& path, std::span<const double> v);
std::vector<double> read_vector(const std::filesystem::path& path);

} // namespace anisodg
