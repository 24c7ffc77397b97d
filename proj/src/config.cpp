#include "teamsim/config.hpp"

#include <fstream>

namespace teamsim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

Eigen::VectorXd parse_vector(const json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i];
  return v;
}

Eigen::MatrixXd parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected an array of rows");
  size_t n = j.size();
  Eigen::MatrixXd m(n, j[0].size());
  for (size_t i = 0; i < n; ++i) {
    if (j[i].size() != static_cast<size_t>(m.cols())) bad("ragged matrix");
    for (size_t k = 0; k < j[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k];
    }
  }
  return m;
}

SkillGen parse_skills(const json& j) {
  SkillGen g;
  std::string kind = j.value("gen", "dirichlet_uniform");
  if (kind == "dirichlet_uniform") {
    g.kind = SkillGen::Kind::kDirichletUniform;
    g.min_entry = j.value("min_entry", g.min_entry);
  } else if (kind == "explicit") {
    g.kind = SkillGen::Kind::kExplicit;
    g.values = parse_vector(j.at("values"));
  } else {
    bad("unknown skills generator: " + kind);
  }
  return g;
}

AssignmentGen parse_assignment(const json& j) {
  AssignmentGen g;
  std::string kind = j.value("gen", "uniform");
  if (kind == "uniform") {
    g.kind = AssignmentGen::Kind::kUniform;
  } else if (kind == "dirichlet_uniform") {
    g.kind = AssignmentGen::Kind::kDirichletUniform;
    g.min_entry = j.value("min_entry", g.min_entry);
  } else if (kind == "explicit") {
    g.kind = AssignmentGen::Kind::kExplicit;
    g.values = parse_vector(j.at("values"));
  } else {
    bad("unknown assignment generator: " + kind);
  }
  return g;
}

AppraisalGen parse_appraisals(const json& j) {
  AppraisalGen g;
  std::string kind = j.value("gen", "dirichlet_uniform_rows");
  if (kind == "dirichlet_uniform_rows") {
    g.kind = AppraisalGen::Kind::kDirichletUniformRows;
    g.min_entry = j.value("min_entry", g.min_entry);
  } else if (kind == "sparse_pattern") {
    g.kind = AppraisalGen::Kind::kSparsePattern;
    g.density = j.value("density", g.density);
  } else if (kind == "explicit") {
    g.kind = AppraisalGen::Kind::kExplicit;
    g.values = parse_matrix(j.at("values"));
  } else {
    bad("unknown appraisal generator: " + kind);
  }
  return g;
}

ObservationGen parse_observation(const json& j) {
  ObservationGen g;
  std::string kind = j.value("gen", "strongly_connected_random");
  if (kind == "strongly_connected_random") {
    g.kind = ObservationGen::Kind::kStronglyConnectedRandom;
    g.extra_edges = j.value("extra_edges", g.extra_edges);
  } else if (kind == "single_sink_random") {
    g.kind = ObservationGen::Kind::kSingleSinkRandom;
  } else if (kind == "disconnected_components") {
    g.kind = ObservationGen::Kind::kDisconnectedComponents;
  } else if (kind == "explicit") {
    g.kind = ObservationGen::Kind::kExplicit;
    g.values = parse_matrix(j.at("values"));
  } else {
    bad("unknown observation generator: " + kind);
  }
  return g;
}

ModelSpec parse_model(const json& j) {
  ModelSpec spec;
  std::string kind = j.value("kind", "manager");
  if (kind == "manager") {
    spec.model = ModelKind::kManager;
  } else if (kind == "assign_appraise") {
    spec.model = ModelKind::kAssignAppraise;
  } else if (kind == "assign_appraise_influence") {
    spec.model = ModelKind::kAssignAppraiseInfluence;
  } else {
    bad("unknown model kind: " + kind);
  }

  std::string rule = j.value("assignment_rule", "eigenvector");
  if (rule == "eigenvector") {
    spec.assignment_rule = AssignmentRule::kEigenvector;
  } else if (rule == "in_degree") {
    spec.assignment_rule = AssignmentRule::kInDegree;
  } else {
    bad("unknown assignment rule: " + rule);
  }

  std::string influence = j.value(
      "influence_rule",
      spec.model == ModelKind::kAssignAppraiseInfluence ? "degroot" : "none");
  if (influence == "none") {
    spec.influence_rule = InfluenceRule::kNone;
  } else if (influence == "degroot") {
    spec.influence_rule = InfluenceRule::kDeGroot;
  } else if (influence == "friedkin_johnsen") {
    spec.influence_rule = InfluenceRule::kFriedkinJohnsen;
  } else {
    bad("unknown influence rule: " + influence);
  }

  spec.params.tau_ave = j.value("tau_ave", 1.0);
  spec.params.tau_app = j.value("tau_app", 1.0);
  if (j.contains("lambda")) {
    if (j["lambda"].is_number()) {
      // scalar shorthand: expanded to a uniform vector once n is known
      spec.params.lambda = Eigen::VectorXd::Constant(1, double(j["lambda"]));
    } else {
      spec.params.lambda = parse_vector(j["lambda"]);
    }
  }
  if (j.contains("gamma_sens")) {
    spec.params.gamma_sens = parse_vector(j["gamma_sens"]);
  }

  if (j.contains("performance")) {
    const json& p = j["performance"];
    std::string fk = p.value("kind", "power_law");
    if (fk == "power_law") {
      spec.f = PerformanceFunction::power_law(p.value("gamma", 0.5));
    } else if (fk == "log1p") {
      spec.f = PerformanceFunction::log1p();
    } else {
      bad("unknown performance kind: " + fk);
    }
  }
  return spec;
}

IntegratorConfig parse_integrator(const json& j) {
  IntegratorConfig cfg;
  std::string method = j.value("method", "rk4");
  if (method == "rk4" || method == "rk4-fixed") {
    cfg.method = StepMethod::kRk4Fixed;
  } else if (method == "rk45" || method == "rk45-adaptive") {
    cfg.method = StepMethod::kRk45Adaptive;
  } else {
    bad("unknown integrator method: " + method);
  }
  cfg.h = j.value("h", cfg.h);
  cfg.t_end = j.value("t_end", cfg.t_end);
  cfg.sample_every = j.value("sample_every", cfg.sample_every);
  cfg.renorm_tol = j.value("renorm_tol", cfg.renorm_tol);
  cfg.clamp_floor = j.value("clamp_floor", cfg.clamp_floor);
  cfg.convergence_window = j.value("convergence_window", cfg.convergence_window);
  cfg.convergence_tol = j.value("convergence_tol", cfg.convergence_tol);
  cfg.rk45_rel_tol = j.value("rk45_rel_tol", cfg.rk45_rel_tol);
  cfg.rk45_abs_tol = j.value("rk45_abs_tol", cfg.rk45_abs_tol);
  cfg.eig_tol = j.value("eig_tol", cfg.eig_tol);
  cfg.eig_max_iter = j.value("eig_max_iter", cfg.eig_max_iter);
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", cfg.seed);
  cfg.n = j.value("n", cfg.n);
  cfg.label = j.value("label", cfg.label);
  if (j.contains("skills")) cfg.skills = parse_skills(j["skills"]);
  if (j.contains("initial_assignment")) {
    cfg.initial_assignment = parse_assignment(j["initial_assignment"]);
  }
  if (j.contains("initial_appraisals")) {
    cfg.initial_appraisals = parse_appraisals(j["initial_appraisals"]);
  }
  if (j.contains("observation")) {
    cfg.observation = parse_observation(j["observation"]);
  }
  if (j.contains("model")) cfg.model = parse_model(j["model"]);
  cfg.random_assignment_baseline =
      j.value("random_assignment_baseline", false);
  if (j.contains("integrator")) cfg.integrator = parse_integrator(j["integrator"]);
  if (j.contains("outputs")) {
    cfg.outputs.clear();
    for (const auto& name : j["outputs"]) cfg.outputs.push_back(name);
  }
  if (j.contains("output_dir")) {
    cfg.output_dir = std::string(j["output_dir"]);
  }
  if (j.contains("snapshot_times")) {
    cfg.snapshot_times.clear();
    for (const auto& t : j["snapshot_times"]) cfg.snapshot_times.push_back(t);
  }
  cfg.emit_svg = j.value("emit_svg", false);
  cfg.declared_violation = j.value("declared_violation", std::string());

  // scalar lambda shorthand expands to a uniform vector
  if (cfg.model.params.lambda.size() == 1 && cfg.n > 1) {
    cfg.model.params.lambda =
        Eigen::VectorXd::Constant(cfg.n, cfg.model.params.lambda(0));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: parse error in " + path.string() +
                                ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["n"] = cfg.n;
  j["label"] = cfg.label;

  nlohmann::ordered_json skills;
  if (cfg.skills.kind == SkillGen::Kind::kExplicit) {
    skills["gen"] = "explicit";
    skills["values"] = std::vector<double>(
        cfg.skills.values.data(),
        cfg.skills.values.data() + cfg.skills.values.size());
  } else {
    skills["gen"] = "dirichlet_uniform";
    skills["min_entry"] = cfg.skills.min_entry;
  }
  j["skills"] = std::move(skills);

  nlohmann::ordered_json model;
  switch (cfg.model.model) {
    case ModelKind::kManager:
      model["kind"] = "manager";
      break;
    case ModelKind::kAssignAppraise:
      model["kind"] = "assign_appraise";
      break;
    case ModelKind::kAssignAppraiseInfluence:
      model["kind"] = "assign_appraise_influence";
      break;
  }
  model["assignment_rule"] =
      cfg.model.assignment_rule == AssignmentRule::kEigenvector
          ? "eigenvector"
          : "in_degree";
  switch (cfg.model.influence_rule) {
    case InfluenceRule::kNone:
      model["influence_rule"] = "none";
      break;
    case InfluenceRule::kDeGroot:
      model["influence_rule"] = "degroot";
      break;
    case InfluenceRule::kFriedkinJohnsen:
      model["influence_rule"] = "friedkin_johnsen";
      break;
  }
  model["tau_ave"] = cfg.model.params.tau_ave;
  model["tau_app"] = cfg.model.params.tau_app;
  if (cfg.model.f.kind() == PerformanceFunction::Kind::kPowerLaw) {
    model["performance"] = {{"kind", "power_law"},
                            {"gamma", cfg.model.f.gamma()}};
  } else {
    model["performance"] = {{"kind", "log1p"}};
  }
  j["model"] = std::move(model);

  j["random_assignment_baseline"] = cfg.random_assignment_baseline;
  j["integrator"] = {
      {"method",
       cfg.integrator.method == StepMethod::kRk4Fixed ? "rk4" : "rk45"},
      {"h", cfg.integrator.h},
      {"t_end", cfg.integrator.t_end},
      {"sample_every", cfg.integrator.sample_every},
      {"convergence_window", cfg.integrator.convergence_window},
      {"convergence_tol", cfg.integrator.convergence_tol},
  };
  j["outputs"] = cfg.outputs;
  j["output_dir"] = cfg.output_dir.string();
  j["declared_violation"] = cfg.declared_violation;
  return j;
}

void set_json_path(nlohmann::json& j, const std::string& dot_path,
                   const nlohmann::json& value) {
  nlohmann::json* node = &j;
  size_t start = 0;
  while (true) {
    size_t dot = dot_path.find('.', start);
    std::string key = dot_path.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) {
      throw std::invalid_argument("empty key in path: " + dot_path);
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

nlohmann::json parse_scalar(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return nlohmann::json(text);
  }
}

}  // namespace teamsim
