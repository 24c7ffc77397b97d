#include "teamsim/scenarios.hpp"

namespace teamsim {

namespace {

// Desk-scale calibration shared by the built-in scenarios: mild skill
// spread, a dense sparse-pattern profile, a well-mixed observation
// network, and time scales chosen so runs settle within t <= 100.

ExperimentConfig base_config(uint64_t seed, int n) {
  ExperimentConfig cfg;
  cfg.seed = seed;
  cfg.n = n;
  cfg.skills.kind = SkillGen::Kind::kDirichletUniform;
  cfg.skills.min_entry = 0.10;
  cfg.observation.kind = ObservationGen::Kind::kStronglyConnectedRandom;
  cfg.observation.extra_edges = 3;
  cfg.integrator.h = 0.01;
  cfg.integrator.t_end = 100.0;
  cfg.integrator.sample_every = 0.1;
  cfg.snapshot_times = {0.0, 2.0, 10.0, 30.0, 100.0};
  return cfg;
}

// Appraise-only team: sparse irreducible positive-diagonal start and
// uniform feedback sensitivity 6 (inside the admissible [0.1, 10] band).
ExperimentConfig assign_appraise_config(uint64_t seed) {
  ExperimentConfig cfg = base_config(seed, 6);
  cfg.model.model = ModelKind::kAssignAppraise;
  cfg.model.params.gamma_sens = Eigen::VectorXd::Constant(6, 6.0);
  cfg.initial_appraisals.kind = AppraisalGen::Kind::kSparsePattern;
  cfg.initial_appraisals.density = 0.9;
  return cfg;
}

// Influence team: entrywise-positive start, both stages at tau = 1/4.
ExperimentConfig influence_config(uint64_t seed) {
  ExperimentConfig cfg = base_config(seed, 6);
  cfg.model.model = ModelKind::kAssignAppraiseInfluence;
  cfg.model.influence_rule = InfluenceRule::kDeGroot;
  cfg.model.params.tau_ave = 0.25;
  cfg.model.params.tau_app = 0.25;
  cfg.initial_appraisals.kind = AppraisalGen::Kind::kDirichletUniformRows;
  cfg.initial_appraisals.min_entry = 1e-3;
  return cfg;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"fig2",  "fig3", "fig5a",            "fig5b",
          "fig6",  "fig7", "manager-baseline", "random-baseline"};
}

Scenario make_scenario(const std::string& name,
                       std::optional<uint64_t> seed_override,
                       const std::filesystem::path& out_base) {
  Scenario sc;
  sc.name = name;

  auto out_dir = [&](uint64_t seed) {
    return out_base / (name + "-seed" + std::to_string(seed));
  };

  if (name == "fig2") {
    sc.seed = seed_override.value_or(42);
    sc.description =
        "assign/appraise team with a strongly connected observation "
        "network: the assignment learns the true skills by t=30 without "
        "appraisal consensus";
    ExperimentConfig cfg = assign_appraise_config(sc.seed);
    cfg.label = "fig2";
    cfg.integrator.t_end = 30.0;
    cfg.snapshot_times = {0.0, 2.0, 10.0, 30.0};
    cfg.output_dir = out_dir(sc.seed);
    sc.runs.push_back(std::move(cfg));
  } else if (name == "fig3") {
    sc.seed = seed_override.value_or(801);
    sc.description =
        "in-degree assignment rule on one team: learning fails without "
        "the influence stage and succeeds with it";
    ExperimentConfig no_inf = base_config(sc.seed, 6);
    no_inf.model.model = ModelKind::kAssignAppraise;
    no_inf.model.assignment_rule = AssignmentRule::kInDegree;
    no_inf.model.params.gamma_sens = Eigen::VectorXd::Constant(6, 6.0);
    no_inf.initial_appraisals.kind = AppraisalGen::Kind::kDirichletUniformRows;
    no_inf.initial_appraisals.min_entry = 1e-3;
    no_inf.label = "fig3-no_influence";
    no_inf.declared_violation = "Assumption 3";
    no_inf.snapshot_times = {0.0, 2.0, 30.0, 50.0, 100.0};
    no_inf.output_dir = out_dir(sc.seed) / "no_influence";
    ExperimentConfig with_inf = influence_config(sc.seed);
    with_inf.model.assignment_rule = AssignmentRule::kInDegree;
    with_inf.label = "fig3-with_influence";
    with_inf.declared_violation = "Assumption 3";
    with_inf.snapshot_times = {0.0, 2.0, 30.0, 50.0, 100.0};
    with_inf.output_dir = out_dir(sc.seed) / "with_influence";
    sc.runs.push_back(std::move(no_inf));
    sc.runs.push_back(std::move(with_inf));
  } else if (name == "fig5a") {
    sc.seed = seed_override.value_or(502);
    sc.description =
        "assign/appraise team whose observation network has two "
        "disconnected components: the appraisals converge but the "
        "assignment misses the true skills";
    ExperimentConfig cfg = assign_appraise_config(sc.seed);
    cfg.label = "fig5a";
    cfg.observation.kind = ObservationGen::Kind::kDisconnectedComponents;
    cfg.declared_violation = "Theorem 3";
    cfg.output_dir = out_dir(sc.seed);
    sc.runs.push_back(std::move(cfg));
  } else if (name == "fig5b") {
    sc.seed = seed_override.value_or(601);
    sc.description =
        "assign/appraise/influence team whose observation network has no "
        "globally reachable node: appraisals reach consensus but the "
        "assignment misses the true skills";
    ExperimentConfig cfg = influence_config(sc.seed);
    cfg.label = "fig5b";
    cfg.observation.kind = ObservationGen::Kind::kDisconnectedComponents;
    cfg.declared_violation = "Theorem 4";
    cfg.output_dir = out_dir(sc.seed);
    sc.runs.push_back(std::move(cfg));
  } else if (name == "fig6") {
    sc.seed = seed_override.value_or(903);
    sc.description =
        "matched teams compared on mismatch and triad transitivity: "
        "influence dynamics, appraise-only dynamics, and random "
        "assignment";
    ExperimentConfig with_inf = influence_config(sc.seed);
    with_inf.initial_appraisals.kind = AppraisalGen::Kind::kSparsePattern;
    with_inf.initial_appraisals.density = 0.9;
    with_inf.label = "fig6-influence";
    with_inf.output_dir = out_dir(sc.seed) / "influence";
    ExperimentConfig appraise_only = assign_appraise_config(sc.seed);
    appraise_only.label = "fig6-appraise_only";
    appraise_only.output_dir = out_dir(sc.seed) / "appraise_only";
    ExperimentConfig random_team = base_config(sc.seed, 6);
    random_team.model.model = ModelKind::kAssignAppraise;
    random_team.initial_appraisals.kind = AppraisalGen::Kind::kSparsePattern;
    random_team.initial_appraisals.density = 0.9;
    random_team.random_assignment_baseline = true;
    random_team.label = "fig6-random";
    random_team.declared_violation = "Assumption 3";
    random_team.output_dir = out_dir(sc.seed) / "random";
    sc.runs.push_back(std::move(with_inf));
    sc.runs.push_back(std::move(appraise_only));
    sc.runs.push_back(std::move(random_team));
  } else if (name == "fig7") {
    sc.seed = seed_override.value_or(701);
    sc.description =
        "Friedkin-Johnsen prejudice in the influence stage: attachment to "
        "initial appraisals blocks collective learning";
    ExperimentConfig cfg = influence_config(sc.seed);
    cfg.label = "fig7";
    cfg.model.influence_rule = InfluenceRule::kFriedkinJohnsen;
    cfg.declared_violation = "Assumption 6";
    cfg.output_dir = out_dir(sc.seed);
    sc.runs.push_back(std::move(cfg));
  } else if (name == "manager-baseline") {
    sc.seed = seed_override.value_or(3);
    sc.description =
        "centralized manager replicator baseline: the assignment "
        "converges to the true skills from any interior start";
    ExperimentConfig cfg = base_config(sc.seed, 6);
    cfg.label = "manager-baseline";
    cfg.model.model = ModelKind::kManager;
    cfg.skills.min_entry = 0.05;
    cfg.initial_assignment.kind = AssignmentGen::Kind::kUniform;
    cfg.integrator.t_end = 200.0;
    cfg.snapshot_times.clear();
    cfg.output_dir = out_dir(sc.seed);
    sc.runs.push_back(std::move(cfg));
  } else if (name == "random-baseline") {
    sc.seed = seed_override.value_or(19);
    sc.description =
        "appraise dynamics driven by workloads redrawn uniformly at every "
        "sample time: no learning signal accumulates";
    ExperimentConfig cfg = base_config(sc.seed, 6);
    cfg.label = "random-baseline";
    cfg.model.model = ModelKind::kAssignAppraise;
    cfg.initial_appraisals.kind = AppraisalGen::Kind::kSparsePattern;
    cfg.initial_appraisals.density = 0.9;
    cfg.random_assignment_baseline = true;
    cfg.declared_violation = "Assumption 3";
    cfg.output_dir = out_dir(sc.seed);
    sc.runs.push_back(std::move(cfg));
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return sc;
}

}  // namespace teamsim
