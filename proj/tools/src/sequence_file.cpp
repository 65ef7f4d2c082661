#include "momentlab/cli/sequence_file.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "momentlab/errors.hpp"

namespace momentlab::cli {

namespace {

using nlohmann::json;

bool is_exact_literal(const std::string& s) {
  try {
    parse_exact_rational(s);
    return true;
  } catch (const InputError&) {
    return false;
  }
}

Real parse_decimal(const std::string& s, unsigned bits) {
  PrecisionScope scope(bits);
  return parse_real(s);
}

std::vector<std::string> string_array(const json& j, const char* field) {
  if (!j.is_array()) throw InputError(std::string("field '") + field + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw InputError(std::string("field '") + field + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

unsigned parse_bits(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(s, &used);
    if (used != s.size() || v < 64 || v > 100000) throw InputError("");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw InputError("precision_bits must be an integer >= 64, got '" + s + "'");
  }
}

}  // namespace

std::string to_string(FileKind k) { return k == FileKind::moments ? "moments" : "pmf"; }

SequenceFile SequenceFile::from(const MomentSequence& m) {
  SequenceFile f;
  f.kind = FileKind::moments;
  f.exact = m.is_exact();
  if (f.exact) {
    f.exact_values = m.exact_values();
  } else {
    f.decimal_values = m.approx_values();
    f.precision_bits = m.precision_bits();
  }
  return f;
}

SequenceFile SequenceFile::from(const distributions::DiscretePMF& p) {
  SequenceFile f;
  f.kind = FileKind::pmf;
  f.exact = false;
  f.precision_bits = p.bits;
  f.decimal_values = p.masses;
  f.abs_errors = p.abs_errors;
  f.tail_mass = p.tail_mass;
  return f;
}

SequenceFile SequenceFile::from_exact_pmf(std::vector<BigRational> p) {
  SequenceFile f;
  f.kind = FileKind::pmf;
  f.exact_values = std::move(p);
  return f;
}

MomentSequence SequenceFile::moments() const {
  if (kind != FileKind::moments) throw InputError("expected a moments file, got a pmf file");
  if (exact) return MomentSequence::exact(exact_values);
  return MomentSequence::approximate(decimal_values, precision_bits);
}

distributions::DiscretePMF SequenceFile::pmf() const {
  if (kind != FileKind::pmf) throw InputError("expected a pmf file, got a moments file");
  distributions::DiscretePMF p;
  if (exact) {
    p.bits = 256;
    PrecisionScope scope(p.bits);
    for (const auto& q : exact_values) {
      p.masses.push_back(to_real(q));
      p.abs_errors.push_back(abs(p.masses.back()) * ldexp(Real(1), 1 - static_cast<int>(p.bits)));
    }
  } else {
    p.bits = precision_bits;
    PrecisionScope scope(p.bits);
    p.masses = decimal_values;
    if (!abs_errors.empty()) {
      p.abs_errors = abs_errors;
    } else {
      for (const auto& m : p.masses) p.abs_errors.push_back(abs(m) * ldexp(Real(1), 4 - static_cast<int>(p.bits)));
    }
  }
  PrecisionScope scope(p.bits);
  Real total = 0;
  for (const auto& m : p.masses) total += m;
  p.tail_mass = tail_mass ? *tail_mass : Real(1 - total);
  return p;
}

SequenceFile parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("sequence file must be a JSON object");
  SequenceFile f;
  const std::string kind = j.value("kind", "moments");
  if (kind == "moments") {
    f.kind = FileKind::moments;
  } else if (kind == "pmf") {
    f.kind = FileKind::pmf;
  } else {
    throw InputError("unknown kind '" + kind + "'");
  }
  if (!j.contains("values")) throw InputError("sequence file has no 'values'");
  const auto values = string_array(j["values"], "values");
  if (values.empty()) throw InputError("sequence file has no values");
  const std::string backend = j.value("backend", "");
  if (backend == "exact") {
    f.exact = true;
    for (const auto& v : values) f.exact_values.push_back(parse_exact_rational(v));
  } else if (backend == "decimal") {
    f.exact = false;
    if (!j.contains("precision_bits")) throw InputError("decimal values must carry precision_bits");
    const auto& pb = j["precision_bits"];
    if (!pb.is_number_integer()) throw InputError("precision_bits must be an integer");
    f.precision_bits = parse_bits(std::to_string(pb.get<long long>()));
    for (const auto& v : values) f.decimal_values.push_back(parse_decimal(v, f.precision_bits));
    if (j.contains("abs_errors")) {
      for (const auto& v : string_array(j["abs_errors"], "abs_errors")) f.abs_errors.push_back(parse_decimal(v, f.precision_bits));
      if (f.abs_errors.size() != f.decimal_values.size()) throw InputError("abs_errors must match values in length");
    }
    if (j.contains("tail_mass")) {
      if (!j["tail_mass"].is_string()) throw InputError("tail_mass must be a string");
      f.tail_mass = parse_decimal(j["tail_mass"].get<std::string>(), f.precision_bits);
    }
  } else {
    throw InputError("backend must be 'exact' or 'decimal'");
  }
  if (j.contains("provenance")) f.provenance = j["provenance"];
  return f;
}

SequenceFile parse_csv(const std::string& text, FileKind kind) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV file");
  const auto header = split(line, ',');
  const bool with_bits = header.size() == 3 && header[2] == "precision_bits";
  if (header.size() < 2 || header[0] != "index" || header[1] != "value" || (header.size() == 3 && !with_bits) || header.size() > 3) {
    throw InputError("CSV header must be 'index,value' or 'index,value,precision_bits'");
  }
  std::vector<std::string> values;
  std::optional<unsigned> bits;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw InputError("CSV row has the wrong number of cells: '" + line + "'");
    if (cells[0] != std::to_string(expected)) throw InputError("CSV indices must run 0, 1, 2, ...");
    ++expected;
    values.push_back(cells[1]);
    if (with_bits) {
      const unsigned b = parse_bits(cells[2]);
      if (bits && *bits != b) throw InputError("precision_bits must be the same on every row");
      bits = b;
    }
  }
  if (values.empty()) throw InputError("CSV file has no rows");
  SequenceFile f;
  f.kind = kind;
  const bool all_exact = std::all_of(values.begin(), values.end(), is_exact_literal);
  if (!bits && all_exact) {
    f.exact = true;
    for (const auto& v : values) f.exact_values.push_back(parse_exact_rational(v));
  } else {
    if (!bits) throw InputError("decimal values must carry precision_bits");
    f.exact = false;
    f.precision_bits = *bits;
    for (const auto& v : values) f.decimal_values.push_back(parse_decimal(v, f.precision_bits));
  }
  return f;
}

SequenceFile parse_sequence(const std::string& text, FileKind csv_kind) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InputError("empty input");
  if (text[first] == '{') return parse_json(text);
  return parse_csv(text, csv_kind);
}

SequenceFile read_sequence_file(const std::string& path, FileKind csv_kind) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sequence(buf.str(), csv_kind);
}

json to_json(const SequenceFile& f) {
  json j;
  j["schema_version"] = schema_version;
  j["kind"] = to_string(f.kind);
  j["backend"] = f.exact ? "exact" : "decimal";
  json values = json::array();
  if (f.exact) {
    for (const auto& v : f.exact_values) values.push_back(momentlab::to_string(v));
  } else {
    j["precision_bits"] = f.precision_bits;
    for (const auto& v : f.decimal_values) values.push_back(momentlab::to_string(v));
    if (!f.abs_errors.empty()) {
      json errors = json::array();
      for (const auto& e : f.abs_errors) errors.push_back(momentlab::to_string(e, 6));
      j["abs_errors"] = errors;
    }
    if (f.tail_mass) j["tail_mass"] = momentlab::to_string(*f.tail_mass);
  }
  j["values"] = values;
  j["provenance"] = f.provenance;
  return j;
}

std::string to_csv(const SequenceFile& f) {
  std::ostringstream out;
  if (f.exact) {
    out << "index,value\n";
    for (std::size_t i = 0; i < f.exact_values.size(); ++i) out << i << ',' << momentlab::to_string(f.exact_values[i]) << '\n';
  } else {
    out << "index,value,precision_bits\n";
    for (std::size_t i = 0; i < f.decimal_values.size(); ++i) {
      out << i << ',' << momentlab::to_string(f.decimal_values[i]) << ',' << f.precision_bits << '\n';
    }
  }
  return out.str();
}

}  // namespace momentlab::cli
