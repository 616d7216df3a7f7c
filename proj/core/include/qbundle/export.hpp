#pragma once
// Machine-readable dumps. JSON payloads use ordered keys and CSV numbers use
// round-trip precision, so identical inputs serialize byte-identically.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "qbundle/bohm.hpp"
#include "qbundle/bundle.hpp"
#include "qbundle/confspace.hpp"
#include "qbundle/fock.hpp"
#include "qbundle/graph.hpp"
#include "qbundle/triple.hpp"

namespace qbundle {

using ordered_json = nlohmann::ordered_json;

// Complex scalars encode as [re, im]; complex matrices as row-major lists.
ordered_json json_complex(const std::complex<double>& z);
ordered_json json_matrix(const Eigen::MatrixXcd& m);

ordered_json graph_json(const Graph& g);
// Ordered graph with configurations, edges, and the fiber projection.
ordered_json pair_json(const ConfigGraphPair& pair);
ordered_json bundle_json(const DiscreteBundle& b);
ordered_json triple_json(const QuantumTriple& t);
ordered_json equivalence_json(const EquivalenceCheck& check);
ordered_json equivalence_json(const SolveReport& report);
ordered_json ensemble_json(const EnsembleReport& report);
ordered_json sector_state_json(int sector, const Eigen::VectorXcd& values);

void write_json(const std::filesystem::path& path, const ordered_json& payload);
void write_spectrum_csv(const std::filesystem::path& path, const Eigen::VectorXd& eigenvalues);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& tr);

}  // namespace qbundle
