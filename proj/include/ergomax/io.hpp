#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergomax/core.hpp"
#include "ergomax/ergodic.hpp"
#include "ergomax/maximal.hpp"
#include "ergomax/report.hpp"
#include "ergomax/weights.hpp"

namespace ergomax {

namespace detail {

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return doc;
}

}  // namespace detail

/// Sequence document: {"offset": int, "values": [real, ...]}.
inline WindowedSequence<double> read_sequence(const std::string& path) {
  const nlohmann::json doc = detail::load_json(path);
  if (!doc.contains("offset") || !doc.contains("values"))
    throw std::runtime_error(path + ": sequence document needs offset and values");
  const auto offset = doc["offset"].get<std::int64_t>();
  const auto values = doc["values"].get<std::vector<double>>();
  if (values.empty()) throw std::runtime_error(path + ": empty value list");
  return {offset, values};
}

inline void write_sequence(const std::string& path, const WindowedSequence<double>& a) {
  nlohmann::json doc;
  doc["offset"] = a.offset();
  doc["values"] = a.values();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

/// Weight document: same layout, entries strictly positive.
inline WeightSequence<double> read_weight(const std::string& path) {
  return WeightSequence<double>(read_sequence(path));
}

/// System document: {"masses": [real, ...], "perm": [int, ...]}.
inline FinitePermutationSystem<double> read_system(const std::string& path) {
  const nlohmann::json doc = detail::load_json(path);
  if (!doc.contains("masses") || !doc.contains("perm"))
    throw std::runtime_error(path + ": system document needs masses and perm");
  return {doc["masses"].get<std::vector<double>>(), doc["perm"].get<std::vector<int>>()};
}

inline void write_system(const std::string& path, const FinitePermutationSystem<double>& sys) {
  nlohmann::json doc;
  doc["masses"] = sys.masses();
  doc["perm"] = sys.perm();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << doc.dump(2) << "\n";
}

/// Atom function file: sequence document with offset 0 and one value per atom.
inline std::vector<double> read_atom_function(const std::string& path, int n_atoms) {
  const WindowedSequence<double> seq = read_sequence(path);
  if (seq.offset() != 0 || seq.size() != n_atoms)
    throw std::runtime_error(path + ": atom function needs offset 0 and " + std::to_string(n_atoms) +
                             " values");
  return seq.values();
}

inline std::string maximal_result_csv(const MaximalResult<double>& result) {
  std::ostringstream out;
  out << "m,value,witness_lo,witness_hi\n";
  const auto window = result.values.window();
  for (std::int64_t m = window.lo; m <= window.hi; ++m) {
    const auto& witness = result.witness(m);
    out << m << "," << nlohmann::json(result.at(m)).dump() << "," << witness.lo << ","
        << witness.hi << "\n";
  }
  return out.str();
}

inline nlohmann::json report_to_json(const InequalityReport& r) {
  nlohmann::json doc;
  doc["checker"] = r.checker;
  doc["digest"] = r.digest;
  doc["lhs"] = r.lhs;
  doc["rhs"] = r.rhs;
  doc["constant"] = r.constant;
  doc["ratio"] = r.ratio;
  doc["pass"] = r.pass;
  doc["witness"] = r.witness;
  doc["aux"] = r.aux;
  return doc;
}

}  // namespace ergomax
