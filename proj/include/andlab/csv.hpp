#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "andlab/config.hpp"

// CSV emission.  Tables are built fully in memory and written through a
// temporary file plus rename, so a crash mid-write can never leave a
// truncated file under the final name.

namespace andlab {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw std::logic_error("csv row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
      out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out += (i ? "," : "") + row[i];
      out += "\n";
    }
    return out;
  }
};

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
    out.close();
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    throw IoError(std::string("filesystem error: ") + e.what());
  }
}

}  // namespace andlab
