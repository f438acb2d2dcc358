#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gsqc/circuit.hpp"

namespace gsqc {

// ordered_json keeps insertion order, so emitted files are stable byte-for-byte
using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline json gate_to_json(const GateMatrix& g) {
  json j;
  if (g.name == "raw") {
    json m = json::array();
    for (const auto& c : g.m) m.push_back(json::array({c.real(), c.imag()}));
    j["matrix"] = std::move(m);
  } else {
    j["gate"] = g.name;
    if (g.k > 0) j["k"] = g.k;
  }
  return j;
}

inline GateMatrix gate_from_json(const json& j, const std::string& where) {
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (!m.is_array() || m.size() != 4)
      throw ParseError(where + ": matrix must be 4 [re,im] pairs (row-major)");
    std::array<Complex, 4> e;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& c = m[i];
      if (!c.is_array() || c.size() != 2) throw ParseError(where + ": matrix entry must be [re,im]");
      e[i] = Complex{c[0].get<double>(), c[1].get<double>()};
    }
    return raw_gate(e);
  }
  if (!j.contains("gate")) throw ParseError(where + ": need \"gate\" or \"matrix\"");
  const std::string name = j.at("gate").get<std::string>();
  const int k = j.value("k", 0);
  try {
    return gate(name, k);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

inline json circuit_to_json(const CircuitSpec& spec) {
  json j;
  j["epsilon"] = spec.epsilon;
  json qs = json::array();
  for (const auto& q : spec.qubits) {
    json jq;
    jq["id"] = q.id;
    jq["boundary"] = {{"a", {q.boundary.a[0], q.boundary.a[1], q.boundary.a[2]}},
                      {"E", q.boundary.E}};
    json rows = json::array();
    for (const auto& op : q.ops) {
      json r;
      r["op"] = op_kind_name(op.kind);
      switch (op.kind) {
        case OpKind::Unitary:
          r.update(detail::gate_to_json(op.g));
          break;
        case OpKind::Boost:
          r["lambda"] = op.lambda;
          break;
        case OpKind::Project:
          r["dot"] = op.dot;
          r["lambda"] = op.lambda;
          break;
        case OpKind::CoupledControl:
          r["partner"] = op.partner;
          r["partner_row"] = op.partner_row;
          break;
        case OpKind::CoupledTarget:
          r.update(detail::gate_to_json(op.g));
          r["partner"] = op.partner;
          r["partner_row"] = op.partner_row;
          break;
      }
      rows.push_back(std::move(r));
    }
    jq["rows"] = std::move(rows);
    qs.push_back(std::move(jq));
  }
  j["qubits"] = std::move(qs);
  return j;
}

inline CircuitSpec circuit_from_json(const json& j) {
  CircuitSpec spec;
  if (!j.is_object()) throw ParseError("top level must be an object");
  spec.epsilon = j.value("epsilon", 1.0);
  if (!j.contains("qubits") || !j.at("qubits").is_array())
    throw ParseError("top level needs a \"qubits\" array");
  for (const auto& jq : j.at("qubits")) {
    QubitSpec q;
    if (!jq.contains("id")) throw ParseError("qubit entry missing \"id\"");
    q.id = jq.at("id").get<std::string>();
    const std::string where0 = "qubit '" + q.id + "'";
    if (jq.contains("boundary")) {
      const auto& jb = jq.at("boundary");
      if (jb.contains("a")) {
        const auto& a = jb.at("a");
        if (!a.is_array() || a.size() != 3) throw ParseError(where0 + ": boundary a must be [ax,ay,az]");
        for (std::size_t i = 0; i < 3; ++i) q.boundary.a[i] = a[i].get<double>();
      }
      q.boundary.E = jb.value("E", 10.0);
    }
    if (!jq.contains("rows") || !jq.at("rows").is_array())
      throw ParseError(where0 + ": missing \"rows\" array");
    int row = 0;
    for (const auto& jr : jq.at("rows")) {
      ++row;
      const std::string where = where0 + " row " + std::to_string(row);
      if (!jr.contains("op")) throw ParseError(where + ": missing \"op\"");
      const std::string kind = jr.at("op").get<std::string>();
      RowOp op;
      if (kind == "unitary") {
        op = RowOp::unitary(detail::gate_from_json(jr, where));
      } else if (kind == "boost") {
        if (!jr.contains("lambda")) throw ParseError(where + ": boost needs \"lambda\"");
        op = RowOp::boost(jr.at("lambda").get<double>());
      } else if (kind == "project") {
        if (!jr.contains("lambda") || !jr.contains("dot"))
          throw ParseError(where + ": project needs \"dot\" and \"lambda\"");
        op = RowOp::project(jr.at("dot").get<int>(), jr.at("lambda").get<double>());
      } else if (kind == "coupled_control" || kind == "coupled_target") {
        if (!jr.contains("partner") || !jr.contains("partner_row"))
          throw ParseError(where + ": coupling needs \"partner\" and \"partner_row\"");
        if (kind == "coupled_control")
          op = RowOp::coupled_control(jr.at("partner").get<std::string>(),
                                      jr.at("partner_row").get<int>());
        else
          op = RowOp::coupled_target(detail::gate_from_json(jr, where),
                                     jr.at("partner").get<std::string>(),
                                     jr.at("partner_row").get<int>());
      } else {
        throw ParseError(where + ": unknown op \"" + kind + "\"");
      }
      q.ops.push_back(std::move(op));
    }
    spec.qubits.push_back(std::move(q));
  }
  return spec;
}

inline std::string circuit_to_string(const CircuitSpec& spec) {
  return circuit_to_json(spec).dump(2) + "\n";
}

inline CircuitSpec circuit_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());  // nlohmann message carries line/column
  }
  return circuit_from_json(j);
}

inline void save_circuit(const CircuitSpec& spec, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << circuit_to_string(spec);
}

inline CircuitSpec load_circuit(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return circuit_from_string(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace gsqc
