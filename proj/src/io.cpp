#include "robineig/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robineig {

namespace {

constexpr int kSchemaVersion = 1;

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json mesh_to_json(const Mesh& mesh) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (const Vec2& p : mesh.nodes) j["nodes"].push_back({p.x(), p.y()});
  j["elements"] = nlohmann::json::array();
  for (const auto& el : mesh.elements) {
    if (mesh.dim == 1)
      j["elements"].push_back({el[0], el[1]});
    else
      j["elements"].push_back({el[0], el[1], el[2]});
  }
  j["boundary_edges"] = nlohmann::json::array();
  for (const auto& be : mesh.boundary_edges) {
    j["boundary_edges"].push_back(
        {{"n", {be.nodes[0], be.nodes[1]}}, {"normal", {be.normal.x(), be.normal.y()}}});
  }
  return j;
}

Mesh mesh_from_json(const nlohmann::json& j) {
  Mesh m;
  for (const auto& p : j.at("nodes"))
    m.nodes.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  for (const auto& el : j.at("elements")) {
    if (el.size() == 2)
      m.elements.push_back({el.at(0).get<int>(), el.at(1).get<int>(), -1});
    else
      m.elements.push_back({el.at(0).get<int>(), el.at(1).get<int>(), el.at(2).get<int>()});
  }
  if (m.elements.empty()) throw std::invalid_argument("mesh JSON has no elements");
  m.dim = m.elements.front()[2] < 0 ? 1 : 2;
  m.node_on_boundary.assign(m.nodes.size(), 0);
  for (const auto& be : j.at("boundary_edges")) {
    BoundaryEdge edge;
    edge.nodes = {be.at("n").at(0).get<int>(), be.at("n").at(1).get<int>()};
    edge.normal = Vec2(be.at("normal").at(0).get<double>(), be.at("normal").at(1).get<double>());
    edge.length = m.dim == 1
                      ? 1.0
                      : (m.nodes[edge.nodes[0]] - m.nodes[edge.nodes[1]]).norm();
    m.boundary_edges.push_back(edge);
    m.node_on_boundary[edge.nodes[0]] = 1;
    m.node_on_boundary[edge.nodes[1]] = 1;
  }
  double hmax = 0;
  for (const auto& el : m.elements) {
    const int k = m.dim + 1;
    for (int a = 0; a < k; ++a)
      hmax = std::max(hmax, (m.nodes[el[a]] - m.nodes[el[(a + 1) % k]]).norm());
  }
  m.h = hmax;
  return m;
}

nlohmann::json eigen_to_json(const EigenResult& r) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["lambda"] = r.lambda;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["phi"] = vec_to_json(r.phi);
  if (r.gap_estimate) j["gap_estimate"] = *r.gap_estimate;
  return j;
}

std::string phi_to_csv(const Mesh& mesh, const Eigen::VectorXd& nodal) {
  if (nodal.size() != mesh.num_nodes())
    throw std::invalid_argument("phi_to_csv: nodal vector does not match mesh");
  std::ostringstream os;
  os << "x,y,phi\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << format_double(mesh.nodes[i].x()) << ',' << format_double(mesh.nodes[i].y())
       << ',' << format_double(nodal[i]) << '\n';
  return os.str();
}

std::string radial_csv_header() { return "d,R,tau,sign,bc,beta,lambda,err_estimate\n"; }

std::string radial_to_csv_row(const RadialProblem& p, const RadialResult& r) {
  std::ostringstream os;
  const bool robin = p.bc.kind == BCKind::robin;
  os << p.d << ',' << format_double(p.R) << ',' << format_double(p.tau) << ',' << p.sign
     << ',' << (robin ? "robin" : "dirichlet") << ',' << format_double(robin ? p.bc.beta : 0)
     << ',' << format_double(r.lambda) << ',' << format_double(r.err_estimate) << '\n';
  return os.str();
}

nlohmann::json extremal_to_json(const ExtremalResult& r, double beta) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["sense"] = r.sense == Sense::minimize ? "minimize" : "maximize";
  j["tau"] = r.drift.tau;
  j["beta"] = beta;
  j["lambda"] = r.eigen.lambda;
  j["optimality_residual"] = r.optimality_residual;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["small_gradient_fraction"] = r.small_gradient_fraction;
  j["trace"] = r.trace;
  return j;
}

std::string drift_to_csv(const Mesh& mesh, const DriftField& drift) {
  std::ostringstream os;
  os << "x,y,vx,vy\n";
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Vec2 c = element_centroid(mesh, e);
    os << format_double(c.x()) << ',' << format_double(c.y()) << ','
       << format_double(drift.values[e].x()) << ',' << format_double(drift.values[e].y())
       << '\n';
  }
  return os.str();
}

nlohmann::json sweep_to_json(const SweepTable& t) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["domain"] = t.domain;
  j["drift"] = t.drift;
  j["h"] = t.h;
  j["h_actual"] = t.h_actual;
  j["passed"] = t.passed;
  if (!t.failure.empty()) j["failure"] = t.failure;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows)
    j["rows"].push_back({{"beta", r.beta},
                         {"lambda", r.lambda},
                         {"residual", r.residual},
                         {"iterations", r.iterations}});
  return j;
}

std::string sweep_to_csv(const SweepTable& t) {
  std::ostringstream os;
  os << "beta,lambda,residual,iterations\n";
  for (const auto& r : t.rows)
    os << format_double(r.beta) << ',' << format_double(r.lambda) << ','
       << format_double(r.residual) << ',' << r.iterations << '\n';
  return os.str();
}

nlohmann::json limits_to_json(const LimitReport& r) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["domain"] = r.domain;
  j["drift"] = r.drift;
  j["h"] = r.h;
  j["lambda_dirichlet"] = r.lambda_dirichlet;
  j["lambda_beta_1e-3"] = r.lambda_small;
  j["lambda_beta_1"] = r.lambda_mid;
  j["lambda_beta_1e3"] = r.lambda_large;
  j["small_beta_ok"] = r.small_beta_ok;
  j["below_dirichlet_ok"] = r.below_dirichlet_ok;
  j["large_beta_ok"] = r.large_beta_ok;
  j["passed"] = r.passed;
  return j;
}

nlohmann::json fk_to_json(const FKReport& r) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["domain"] = r.domain;
  j["ball"] = r.ball;
  j["tau"] = r.tau;
  j["h"] = r.h;
  j["n_random"] = r.n_random;
  j["seed"] = r.seed;
  j["passed"] = r.passed;
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (r.beta0) j["beta0"] = *r.beta0;
  if (r.epsilon) j["epsilon"] = *r.epsilon;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"beta", row.beta},
                         {"lambda_min", row.lambda_min},
                         {"lambda_ref", row.lambda_ref},
                         {"margin", row.margin},
                         {"error_bound", row.error_bound},
                         {"margin_positive", row.margin_positive},
                         {"extremal_iterations", row.extremal_iterations},
                         {"sanity_violations", row.sanity_violations}});
  return j;
}

std::string fk_to_csv(const FKReport& r) {
  std::ostringstream os;
  os << "beta,lambda_min,lambda_ref,margin,error_bound,margin_positive\n";
  for (const auto& row : r.rows)
    os << format_double(row.beta) << ',' << format_double(row.lambda_min) << ','
       << format_double(row.lambda_ref) << ',' << format_double(row.margin) << ','
       << format_double(row.error_bound) << ',' << (row.margin_positive ? 1 : 0) << '\n';
  return os.str();
}

nlohmann::json convergence_to_json(const ConvergenceTable& t) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["domain"] = t.domain;
  j["drift"] = t.drift;
  j["bc"] = t.bc;
  j["fitted_order"] = t.fitted_order;
  j["lambda_extrapolated"] = t.lambda_extrapolated;
  j["passed"] = t.passed;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows)
    j["rows"].push_back(
        {{"h", row.h}, {"h_actual", row.h_actual}, {"lambda", row.lambda}});
  return j;
}

std::string convergence_to_csv(const ConvergenceTable& t) {
  std::ostringstream os;
  os << "h,h_actual,lambda\n";
  for (const auto& row : t.rows)
    os << format_double(row.h) << ',' << format_double(row.h_actual) << ','
       << format_double(row.lambda) << '\n';
  return os.str();
}

nlohmann::json sandwich_to_json(const SandwichReport& r, double tau, double beta) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tau"] = tau;
  j["beta"] = beta;
  j["lambda_min"] = r.lambda_min;
  j["lambda_max"] = r.lambda_max;
  j["lambdas"] = r.lambdas;
  j["violating_indices"] = r.violating_indices;
  j["passed"] = r.passed;
  return j;
}

std::string matrix_to_coord(const SpMat& m) {
  std::ostringstream os;
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

}  // namespace robineig
