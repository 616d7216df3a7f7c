#include "qbundle/export.hpp"

#include <cstdio>
#include <fstream>

#include "qbundle/errors.hpp"

namespace qbundle {
namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw DomainError("write failed: " + path.string());
}

}  // namespace

ordered_json json_complex(const std::complex<double>& z) {
  return ordered_json::array({z.real(), z.imag()});
}

ordered_json json_matrix(const Eigen::MatrixXcd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json graph_json(const Graph& g) {
  ordered_json j;
  ordered_json vertices = ordered_json::array();
  for (int v = 0; v < g.num_vertices; ++v) vertices.push_back(v);
  ordered_json edges = ordered_json::array();
  for (const auto& e : g.edges) edges.push_back(ordered_json::array({e[0], e[1]}));
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  return j;
}

ordered_json pair_json(const ConfigGraphPair& pair) {
  ordered_json j;
  ordered_json vertices = ordered_json::array();
  for (const auto& c : pair.ordered.configs) vertices.push_back(c);
  ordered_json edges = ordered_json::array();
  for (const auto& e : pair.ordered.graph.edges)
    edges.push_back(ordered_json::array({e[0], e[1]}));
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  j["projection"] = pair.projection;
  ordered_json qvertices = ordered_json::array();
  for (const auto& c : pair.quotient_configs) qvertices.push_back(c);
  ordered_json qedges = ordered_json::array();
  for (const auto& e : pair.quotient.edges)
    qedges.push_back(ordered_json::array({e[0], e[1]}));
  j["quotient_vertices"] = std::move(qvertices);
  j["quotient_edges"] = std::move(qedges);
  return j;
}

ordered_json bundle_json(const DiscreteBundle& b) {
  ordered_json j;
  j["rank"] = b.rank;
  j["graph_hash"] = b.graph_hash;
  ordered_json edges = ordered_json::array();
  for (std::size_t e = 0; e < b.unitaries.size(); ++e) {
    ordered_json entry;
    entry["edge"] = ordered_json::array({b.graph->edges[e][0], b.graph->edges[e][1]});
    ordered_json flat = ordered_json::array();
    const Eigen::MatrixXcd& u = b.unitaries[e];
    for (Eigen::Index r = 0; r < u.rows(); ++r)
      for (Eigen::Index c = 0; c < u.cols(); ++c) flat.push_back(json_complex(u(r, c)));
    entry["unitary"] = std::move(flat);
    edges.push_back(std::move(entry));
  }
  j["edge_unitaries"] = std::move(edges);
  return j;
}

ordered_json triple_json(const QuantumTriple& t) {
  ordered_json j;
  j["dim"] = t.dim;
  j["hamiltonian"] = json_matrix(t.H);
  ordered_json cells = ordered_json::array();
  for (int c = 0; c < t.Q.outcomes(); ++c) {
    ordered_json cell;
    cell["label"] = t.Q.labels[c];
    cell["indices"] = t.Q.cells[c];
    cells.push_back(std::move(cell));
  }
  j["pvm"] = std::move(cells);
  return j;
}

namespace {

ordered_json witness_json(const EquivalenceWitness& w) {
  ordered_json j;
  j["unitary"] = json_matrix(w.U);
  ordered_json residuals;
  residuals["unitarity"] = w.unitarity_residual;
  residuals["hamiltonian"] = w.h_residual;
  residuals["pvm_cells"] = w.q_residuals;
  j["residuals"] = std::move(residuals);
  return j;
}

}  // namespace

ordered_json equivalence_json(const EquivalenceCheck& check) {
  ordered_json j;
  j["status"] = check.equivalent ? "Witness" : "NoEquivalence";
  ordered_json residuals;
  residuals["unitarity"] = check.witness.unitarity_residual;
  residuals["hamiltonian"] = check.witness.h_residual;
  residuals["pvm_cells"] = check.witness.q_residuals;
  j["residuals"] = std::move(residuals);
  if (check.equivalent) j["witness"] = witness_json(check.witness);
  return j;
}

ordered_json equivalence_json(const SolveReport& report) {
  ordered_json j;
  switch (report.status) {
    case SolveStatus::Witness: j["status"] = "Witness"; break;
    case SolveStatus::NoEquivalence: j["status"] = "NoEquivalence"; break;
    case SolveStatus::Unsupported: j["status"] = "Unsupported"; break;
  }
  if (report.witness.has_value()) {
    ordered_json residuals;
    residuals["unitarity"] = report.witness->unitarity_residual;
    residuals["hamiltonian"] = report.witness->h_residual;
    residuals["pvm_cells"] = report.witness->q_residuals;
    j["residuals"] = std::move(residuals);
    j["witness"] = witness_json(*report.witness);
  } else {
    j["residuals"] = ordered_json::object();
  }
  if (!report.obstruction.empty()) j["obstruction"] = report.obstruction;
  j["components"] = report.components;
  j["ambiguous"] = report.ambiguous;
  return j;
}

ordered_json ensemble_json(const EnsembleReport& report) {
  ordered_json j;
  j["ks_statistic"] = report.ks_statistic;
  j["p_value"] = report.p_value;
  j["failures"] = report.failures;
  j["samples"] = report.samples;
  j["degraded"] = report.degraded;
  return j;
}

ordered_json sector_state_json(int sector, const Eigen::VectorXcd& values) {
  ordered_json j;
  j["sector"] = sector;
  ordered_json vals = ordered_json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) vals.push_back(json_complex(values[i]));
  j["values"] = std::move(vals);
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& payload) {
  write_text(path, payload.dump(2) + "\n");
}

void write_spectrum_csv(const std::filesystem::path& path, const Eigen::VectorXd& eigenvalues) {
  std::string text = "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    text += std::to_string(i);
    text += ',';
    text += fmt_double(eigenvalues[i]);
    text += '\n';
  }
  write_text(path, text);
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr) {
  const int width = tr.points.empty() ? 0 : static_cast<int>(tr.points.front().size());
  std::string text = "t";
  for (int i = 0; i < width; ++i) text += ",x" + std::to_string(i + 1);
  text += '\n';
  for (std::size_t row = 0; row < tr.times.size(); ++row) {
    text += fmt_double(tr.times[row]);
    for (int i = 0; i < width; ++i) {
      text += ',';
      text += fmt_double(tr.points[row][i]);
    }
    text += '\n';
  }
  write_text(path, text);
}

}  // namespace qbundle
