// Copyright 2026 The levyot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON (de)serialization of measures, grids and reports. Every number is
// written with 17 significant digits so that outputs round-trip and are
// byte-identical across runs.

#ifndef LEVYOT_IO_HPP_
#define LEVYOT_IO_HPP_

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "levyot/common.hpp"
#include "levyot/measures.hpp"
#include "levyot/transport.hpp"
#include "levyot/viscosity.hpp"

namespace levyot::io {

using Json = nlohmann::json;

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void escape(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

inline void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string((depth + 1) * indent, ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(depth * indent, ' ') : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += pad;
        escape(out, it.key());
        out += indent > 0 ? ": " : ":";
        write(out, it.value(), indent, depth + 1);
      }
      out += close + '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += flat && indent > 0 ? ", " : ",";
        if (!flat) out += pad;
        write(out, j[k], indent, depth + 1);
      }
      out += (flat ? "" : close) + ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        out += fmt(x);
      } else {
        out += "null";
      }
      return;
    }
    case Json::value_t::string:
      escape(out, j.get<std::string>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

// Serializer with 17-significant-digit floats; non-finite values become null.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::write(out, j, indent, 0);
  return out;
}

// Line and column (1-based) of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                       std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Parses JSON text; syntax errors become InvalidInput with line:column.
inline Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte is one past the offending character.
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    // Drop the library's own "[json.exception...] ... column N: " prefix.
    const auto cut = msg.find("column ");
    if (cut != std::string::npos) {
      const auto colon = msg.find(": ", cut);
      if (colon != std::string::npos) msg = msg.substr(colon + 2);
    }
    throw InvalidInput(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": malformed JSON: " + msg);
  }
}

inline Json load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Schema helpers.

inline const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw InvalidInput(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidInput(where + ": missing field \"" + key + "\"");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InvalidInput(where + ": expected a number");
  return j.get<double>();
}

inline double number_or(const Json& obj, const std::string& key, double fallback,
                        const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return number(obj.at(key), where + "." + key);
}

inline std::size_t count(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InvalidInput(where + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline std::size_t count_or(const Json& obj, const std::string& key, std::size_t fallback,
                            const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return count(obj.at(key), where + "." + key);
}

inline std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(number(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Measures: { "dim": d, "atoms": [ { "z": [...], "w": f } ] }.

inline DiscreteMeasure measure_from_json(const Json& j, const std::string& where = "measure") {
  const std::size_t dim = count(field(j, "dim", where), where + ".dim");
  if (dim == 0) throw InvalidInput(where + ".dim: must be positive");
  const Json& atoms = field(j, "atoms", where);
  if (!atoms.is_array()) throw InvalidInput(where + ".atoms: expected an array");
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::string at = where + ".atoms[" + std::to_string(k) + "]";
    Atom a{numbers(field(atoms[k], "z", at), at + ".z"), number(field(atoms[k], "w", at), at + ".w")};
    if (a.z.size() != dim) throw InvalidInput(at + ".z: expected " + std::to_string(dim) + " coordinates");
    if (!(a.w > 0.0)) throw InvalidInput(at + ".w: weight must be > 0");
    if (squared_norm(a.z) == 0.0) throw InvalidInput(at + ".z: atom at the origin");
    out.push_back(std::move(a));
  }
  try {
    return DiscreteMeasure(dim, out);
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

inline Json measure_to_json(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto z = mu.position(i);
    atoms.push_back({{"z", std::vector<double>(z.begin(), z.end())}, {"w", mu.weight(i)}});
  }
  return {{"dim", mu.dim()}, {"atoms", atoms}};
}

inline DiscreteMeasure load_measure(const std::string& path) {
  return measure_from_json(load(path), path);
}

// ---------------------------------------------------------------------------
// Reports.

inline Json plan_to_json(const TransportPlan& plan) {
  Json direct = Json::array();
  for (const auto& e : plan.direct) direct.push_back({e.i, e.j, e.mass});
  return {{"direct", direct}, {"to_reservoir", plan.to_reservoir},
          {"from_reservoir", plan.from_reservoir}};
}

inline Json report_to_json(const SolveReport& r, double p) {
  return {{"p", p},
          {"value", r.value},
          {"distance", std::pow(r.value, 1.0 / p)},
          {"dual_value", r.dual_value},
          {"gap", r.gap},
          {"iterations", r.iterations},
          {"plan", plan_to_json(r.plan)},
          {"duals", {{"phi", r.duals.phi}, {"psi", r.duals.psi}}}};
}

inline DualPotentials duals_from_json(const Json& j, const std::string& where) {
  return {numbers(field(j, "phi", where), where + ".phi"),
          numbers(field(j, "psi", where), where + ".psi")};
}

// Grids: { "lo": [...], "hi": [...], "shape": [...], "values": [...] }.
inline GridFunction grid_from_json(const Json& j, const std::string& where = "grid") {
  const auto lo = numbers(field(j, "lo", where), where + ".lo");
  const auto hi = numbers(field(j, "hi", where), where + ".hi");
  const Json& sh = field(j, "shape", where);
  if (!sh.is_array()) throw InvalidInput(where + ".shape: expected an array");
  std::vector<std::size_t> shape;
  for (std::size_t k = 0; k < sh.size(); ++k) {
    shape.push_back(count(sh[k], where + ".shape[" + std::to_string(k) + "]"));
  }
  auto values = numbers(field(j, "values", where), where + ".values");
  try {
    GridFunction g(lo, hi, shape);
    return g.with_values(std::move(values));
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + ": " + e.what());
  }
}

inline Json grid_to_json(const GridFunction& g) {
  std::vector<double> lo, hi;
  std::vector<std::size_t> shape;
  for (std::size_t a = 0; a < g.dim(); ++a) {
    lo.push_back(g.lo(a));
    hi.push_back(g.hi(a));
    shape.push_back(g.shape(a));
  }
  return {{"lo", lo}, {"hi", hi}, {"shape", shape}, {"values", g.values()}};
}

}  // namespace levyot::io

#endif  // LEVYOT_IO_HPP_
