#ifndef GINV_CHAIN_IO_HPP
#define GINV_CHAIN_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ginv/matrix.hpp"

namespace ginv {

enum class ChainFileFormat { plain, csv, json };

// A parsed matrix file. plain/csv hold m rows of m numbers (whitespace or
// comma separated); json holds {"P": [[...]], "labels": [...]} where labels
// are optional. A json envelope produced by the CLI re-ingests through the
// nested "input" object.
struct ChainFile {
  std::string path;
  ChainFileFormat format = ChainFileFormat::plain;
  Matrix matrix;
  std::vector<std::string> labels;  // defaults to "1".."m"
  std::uint64_t digest = 0;         // FNV-1a over the raw bytes
};

ChainFile load_chain_file(const std::string& path);

// Square matrix without the chain-specific labels (perturbation files).
Matrix load_matrix_file(const std::string& path);

// All numeric tokens in the file, in order.
Vector load_vector_file(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace ginv

#endif  // GINV_CHAIN_IO_HPP
