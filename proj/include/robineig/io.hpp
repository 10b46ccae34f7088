#pragma once

#include <string>

#include <json.hpp>

#include "robineig/experiments.hpp"

namespace robineig {

/// Shortest round-trip decimal representation (locale-independent).
std::string format_double(double x);

nlohmann::json mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const nlohmann::json& j);

nlohmann::json eigen_to_json(const EigenResult& r);
std::string phi_to_csv(const Mesh& mesh, const Eigen::VectorXd& nodal);

std::string radial_to_csv_row(const RadialProblem& p, const RadialResult& r);
std::string radial_csv_header();

nlohmann::json extremal_to_json(const ExtremalResult& r, double beta);
std::string drift_to_csv(const Mesh& mesh, const DriftField& drift);

nlohmann::json sweep_to_json(const SweepTable& t);
std::string sweep_to_csv(const SweepTable& t);

nlohmann::json limits_to_json(const LimitReport& r);

nlohmann::json fk_to_json(const FKReport& r);
std::string fk_to_csv(const FKReport& r);

nlohmann::json convergence_to_json(const ConvergenceTable& t);
std::string convergence_to_csv(const ConvergenceTable& t);

nlohmann::json sandwich_to_json(const SandwichReport& r, double tau, double beta);

/// Coordinate "row col value" lines, zero-based, one entry per line.
std::string matrix_to_coord(const SpMat& m);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace robineig
