#pragma once

// On-disk sequences. JSON:
//   {"schema_version": 1, "kind": "moments"|"pmf", "backend": "exact"|"decimal",
//    "precision_bits": n, "values": ["1", "3/2", ...], "abs_errors": [...], "tail_mass": "...",
//    "provenance": {...}}
// CSV: header "index,value" or "index,value,precision_bits".
//
// Exact values are "p" or "p/q" strings and round-trip losslessly. Decimal values always carry
// precision_bits.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "momentlab/distributions.hpp"
#include "momentlab/moment_sequence.hpp"
#include "momentlab/numeric.hpp"

namespace momentlab::cli {

inline constexpr int schema_version = 1;

enum class FileKind { moments, pmf };

struct SequenceFile {
  FileKind kind = FileKind::moments;
  bool exact = true;
  unsigned precision_bits = 0;
  std::vector<BigRational> exact_values;
  std::vector<Real> decimal_values;
  std::vector<Real> abs_errors;
  std::optional<Real> tail_mass;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t size() const { return exact ? exact_values.size() : decimal_values.size(); }

  static SequenceFile from(const MomentSequence& m);
  static SequenceFile from(const distributions::DiscretePMF& p);
  static SequenceFile from_exact_pmf(std::vector<BigRational> p);

  MomentSequence moments() const;
  /// Exact files get zero error bounds; decimal files without abs_errors get one ulp-scale bound.
  distributions::DiscretePMF pmf() const;
};

std::string to_string(FileKind k);

SequenceFile parse_json(const std::string& text);
/// CSV carries no kind field; the caller supplies it.
SequenceFile parse_csv(const std::string& text, FileKind kind);
/// Dispatches on the first non-blank character: '{' means JSON.
SequenceFile parse_sequence(const std::string& text, FileKind csv_kind);
SequenceFile read_sequence_file(const std::string& path, FileKind csv_kind);

nlohmann::json to_json(const SequenceFile& f);
std::string to_csv(const SequenceFile& f);

}  // namespace momentlab::cli
