#include "gridcop/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gridcop {

namespace {

double parse_double(std::string_view token, const std::string& where) {
  double v = 0.0;
  const auto* begin = token.data();
  const auto* end = token.data() + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw IoError(where + ": cannot parse number '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Dataset read_csv_dataset(const std::filesystem::path& path, bool header,
                         const std::vector<int>& columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file " + path.string());
  Dataset data;
  std::string line;
  std::size_t lineno = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto tokens = split(trimmed, ',');
    std::vector<int> use = columns;
    if (use.empty()) {
      use.resize(tokens.size());
      for (std::size_t i = 0; i < tokens.size(); ++i) use[i] = static_cast<int>(i);
    }
    if (first_row) {
      data.d = static_cast<int>(use.size());
      first_row = false;
    } else if (static_cast<int>(use.size()) != data.d) {
      throw IoError(path.string() + ": row " + std::to_string(lineno) +
                    " has a different column count");
    }
    for (int col : use) {
      if (col < 0 || col >= static_cast<int>(tokens.size())) {
        throw IoError(path.string() + ": row " + std::to_string(lineno) + " lacks column " +
                      std::to_string(col));
      }
      data.y.push_back(parse_double(trim(tokens[static_cast<std::size_t>(col)]),
                                    path.string() + ": row " + std::to_string(lineno)));
    }
    ++data.n;
  }
  return data;
}

void write_csv_matrix(const std::filesystem::path& path, std::span<const double> values,
                      std::size_t rows, std::size_t cols, const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (!names.empty()) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      out << (j ? "," : "") << names[j];
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      out << (j ? "," : "") << format_double(values[i * cols + j]);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::string grid_to_text(const Grid& g) {
  std::ostringstream out;
  out << g.dims();
  for (int i = 0; i < g.dims(); ++i) {
    out << ' ' << g.intervals(i);
    for (double c : g.cuts(i)) out << ' ' << format_double(c);
  }
  return out.str();
}

Grid grid_from_text(const std::string& line) {
  std::istringstream in(line);
  int d = 0;
  if (!(in >> d) || d < 2) throw IoError("grid line: bad dimension count");
  std::vector<std::vector<double>> cuts(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    int m = 0;
    if (!(in >> m) || m < 1) throw IoError("grid line: bad interval count");
    cuts[i].resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      if (!(in >> cuts[i][k])) throw IoError("grid line: missing cut value");
    }
  }
  return Grid(std::move(cuts));
}

namespace {
constexpr const char* kCopulaMagic = "GRIDCOP-COPULA 1";
constexpr const char* kChainTextMagic = "GRIDCOP-CHAIN 1";
constexpr const char* kChainBinaryMagic = "GRIDCOP-CHAIN-BIN 1";
}  // namespace

void write_copula(const std::filesystem::path& path, const GridCopula& c) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kCopulaMagic << '\n' << grid_to_text(c.grid()) << '\n';
  const auto m = c.mass();
  for (std::size_t f = 0; f < m.size(); ++f) out << (f ? " " : "") << format_double(m[f]);
  out << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

GridCopula read_copula(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open copula file " + path.string());
  std::string line;
  if (!std::getline(in, line) || std::string(trim(line)) != kCopulaMagic) {
    throw IoError(path.string() + ": not a copula file (bad magic line)");
  }
  if (!std::getline(in, line)) throw IoError(path.string() + ": missing grid line");
  Grid g = grid_from_text(line);
  std::vector<double> mass(g.cell_count());
  for (auto& m : mass) {
    if (!(in >> m)) throw IoError(path.string() + ": truncated mass vector");
  }
  return GridCopula(std::move(g), std::move(mass), kCopulaTolLoose);
}

void write_chain(const std::filesystem::path& path, const Grid& g,
                 const std::vector<std::vector<double>>& samples, ChainFormat format) {
  if (format == ChainFormat::text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << kChainTextMagic << '\n' << grid_to_text(g) << '\n';
    for (const auto& s : samples) {
      for (std::size_t f = 0; f < s.size(); ++f) out << (f ? " " : "") << format_double(s[f]);
      out << '\n';
    }
    out << "count " << samples.size() << '\n';
    if (!out) throw IoError("failed writing " + path.string());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::string header = std::string(kChainBinaryMagic) + "\n" + grid_to_text(g) + "\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& s : samples) {
    out.write(reinterpret_cast<const char*>(s.data()),
              static_cast<std::streamsize>(s.size() * sizeof(double)));
  }
  const std::uint64_t count = samples.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  if (!out) throw IoError("failed writing " + path.string());
}

ChainFile read_chain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open chain file " + path.string());
  std::string magic;
  if (!std::getline(in, magic)) throw IoError(path.string() + ": empty chain file");
  const bool binary = std::string(trim(magic)) == kChainBinaryMagic;
  if (!binary && std::string(trim(magic)) != kChainTextMagic) {
    throw IoError(path.string() + ": unknown chain format or version: '" + magic + "'");
  }
  std::string grid_line;
  if (!std::getline(in, grid_line)) throw IoError(path.string() + ": missing grid line");
  ChainFile chain(grid_from_text(grid_line));
  const std::size_t cells = chain.grid.cell_count();

  if (binary) {
    std::vector<char> rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (rest.size() < sizeof(std::uint64_t)) {
      throw IoError(path.string() + ": truncated binary chain (missing record count)");
    }
    const std::size_t payload = rest.size() - sizeof(std::uint64_t);
    std::uint64_t count = 0;
    std::memcpy(&count, rest.data() + payload, sizeof count);
    if (payload != count * cells * sizeof(double)) {
      throw IoError(path.string() + ": binary chain length does not match record count " +
                    std::to_string(count));
    }
    chain.samples.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      chain.samples[i].resize(cells);
      std::memcpy(chain.samples[i].data(), rest.data() + i * cells * sizeof(double),
                  cells * sizeof(double));
    }
    return chain;
  }

  std::string line;
  std::size_t lineno = 2;
  bool saw_count = false;
  std::uint64_t declared = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.substr(0, 6) == "count ") {
      declared = static_cast<std::uint64_t>(
          parse_double(trim(trimmed.substr(6)), path.string() + ": count line"));
      saw_count = true;
      break;
    }
    const auto tokens = split(trimmed, ' ');
    std::vector<double> sample;
    sample.reserve(cells);
    for (auto t : tokens) {
      if (trim(t).empty()) continue;
      sample.push_back(parse_double(trim(t), path.string() + ": line " + std::to_string(lineno)));
    }
    if (sample.size() != cells) {
      throw IoError(path.string() + ": line " + std::to_string(lineno) + " has " +
                    std::to_string(sample.size()) + " values, grid has " + std::to_string(cells) +
                    " cells");
    }
    chain.samples.push_back(std::move(sample));
  }
  if (!saw_count) {
    throw IoError(path.string() + ": missing trailing record count (file truncated?)");
  }
  if (declared != chain.samples.size()) {
    throw IoError(path.string() + ": trailing count " + std::to_string(declared) +
                  " does not match " + std::to_string(chain.samples.size()) + " records");
  }
  return chain;
}

}  // namespace gridcop
