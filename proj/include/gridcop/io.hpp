#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridcop/copula.hpp"
#include "gridcop/grid.hpp"
#include "gridcop/likelihood.hpp"
#include "gridcop/mcmc.hpp"

namespace gridcop {

// --- delimited text datasets -------------------------------------------------

// Reads a CSV of numeric columns (dot decimal, locale independent). If
// `columns` is empty all columns are used. Errors name the offending row.
Dataset read_csv_dataset(const std::filesystem::path& path, bool header,
                         const std::vector<int>& columns = {});

void write_csv_matrix(const std::filesystem::path& path, std::span<const double> values,
                      std::size_t rows, std::size_t cols, const std::vector<std::string>& names);

// --- grid / copula / chain formats -------------------------------------------

// Grid serialization: dimension count, then per dimension the interval count
// followed by the cut list, all as decimal text on one line.
std::string grid_to_text(const Grid& g);
Grid grid_from_text(const std::string& line);

// Single-copula file: header line, grid line, one mass line.
void write_copula(const std::filesystem::path& path, const GridCopula& c);
GridCopula read_copula(const std::filesystem::path& path);

// Chain files hold the thinned mass-vector samples. Text mode is the
// documented default; binary stores raw little-endian doubles. Both carry a
// trailing record count for truncation detection. Text round-trips exactly
// (17 significant digits); binary is bit-exact.
enum class ChainFormat { text, binary };

struct ChainFile {
  Grid grid;
  std::vector<std::vector<double>> samples;

  ChainFile(Grid g) : grid(std::move(g)) {}
};

void write_chain(const std::filesystem::path& path, const Grid& g,
                 const std::vector<std::vector<double>>& samples, ChainFormat format);
ChainFile read_chain(const std::filesystem::path& path);

// --- formatting helpers -------------------------------------------------------

// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double v);

// FNV-1a hash of a string, used for config manifests.
std::uint64_t fnv1a(const std::string& s);

}  // namespace gridcop
