#include "coplan/environment.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coplan/errors.hpp"

namespace coplan {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    }
    j["data"] = data;
    return j;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
        throw ConfigError(field + ": expected {rows, cols, data}");
    }
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
        throw ConfigError(field + ": data length does not match rows*cols");
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
    }
    return m;
}

json vector_to_json(const Vector& v) {
    std::vector<double> data(v.data(), v.data() + v.size());
    return json(data);
}

Vector vector_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw ConfigError(field + ": expected an array");
    const auto data = j.get<std::vector<double>>();
    Vector v(static_cast<Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) v[static_cast<Index>(i)] = data[i];
    return v;
}

json robot_to_json(const RobotSpec& spec) {
    json j;
    j["A"] = matrix_to_json(spec.model.A);
    j["B"] = matrix_to_json(spec.model.B);
    j["Q"] = matrix_to_json(spec.model.Q);
    if (spec.model.C_prop) {
        j["C_prop"] = matrix_to_json(*spec.model.C_prop);
        j["R_prop"] = matrix_to_json(*spec.model.R_prop);
    } else {
        j["C_prop"] = nullptr;
        j["R_prop"] = nullptr;
    }
    j["body_radius"] = spec.model.body_radius;
    std::vector<Index> proj(spec.model.workspace_proj.begin(), spec.model.workspace_proj.end());
    j["workspace_proj"] = proj;
    j["u_max"] = spec.model.u_max;
    j["start"] = {{"mean", vector_to_json(spec.start.mean())}, {"cov", matrix_to_json(spec.start.covariance())}};
    j["goal"] = {{"center", vector_to_json(spec.goal.center)}, {"radius", spec.goal.radius}};
    return j;
}

RobotSpec robot_from_json(const json& j, const std::string& field) {
    RobotSpec spec;
    spec.model.A = matrix_from_json(j.at("A"), field + ".A");
    spec.model.B = matrix_from_json(j.at("B"), field + ".B");
    spec.model.Q = matrix_from_json(j.at("Q"), field + ".Q");
    if (j.contains("C_prop") && !j.at("C_prop").is_null()) {
        spec.model.C_prop = matrix_from_json(j.at("C_prop"), field + ".C_prop");
        if (!j.contains("R_prop") || j.at("R_prop").is_null()) {
            throw ConfigError(field + ": C_prop requires R_prop");
        }
        spec.model.R_prop = matrix_from_json(j.at("R_prop"), field + ".R_prop");
    }
    spec.model.body_radius = j.at("body_radius").get<double>();
    for (const auto& idx : j.at("workspace_proj")) spec.model.workspace_proj.push_back(idx.get<Index>());
    spec.model.u_max = j.value("u_max", 0.5);
    spec.start = GaussianBelief(vector_from_json(j.at("start").at("mean"), field + ".start.mean"),
                                matrix_from_json(j.at("start").at("cov"), field + ".start.cov"));
    spec.goal.center = vector_from_json(j.at("goal").at("center"), field + ".goal.center");
    spec.goal.radius = j.at("goal").at("radius").get<double>();
    return spec;
}

json obstacle_to_json(const Obstacle& o) {
    json j;
    if (o.kind == Obstacle::Kind::Rect) {
        j["type"] = "rect";
        j["min"] = vector_to_json(o.lo);
        j["max"] = vector_to_json(o.hi);
    } else {
        j["type"] = "disc";
        j["center"] = vector_to_json(o.center);
        j["radius"] = o.radius;
    }
    return j;
}

Obstacle obstacle_from_json(const json& j, const std::string& field) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "rect") {
        return Obstacle::rect(vector_from_json(j.at("min"), field + ".min"),
                              vector_from_json(j.at("max"), field + ".max"));
    }
    if (type == "disc") {
        return Obstacle::disc(vector_from_json(j.at("center"), field + ".center"), j.at("radius").get<double>());
    }
    throw ConfigError(field + ": unknown obstacle type '" + type + "'");
}

json environment_to_json_obj(const Environment& env) {
    json j;
    j["name"] = env.name;
    if (!env.notes.empty()) j["notes"] = env.notes;
    j["workspace"] = {{"min", vector_to_json(env.bounds.lo)}, {"max", vector_to_json(env.bounds.hi)}};
    json obstacles = json::array();
    for (const Obstacle& o : env.obstacles) obstacles.push_back(obstacle_to_json(o));
    j["obstacles"] = obstacles;
    j["budget"] = {{"p_safe", env.budget.p_safe},
                   {"p_obs", env.budget.p_obs},
                   {"p_rob", env.budget.p_rob},
                   {"p_ncl", env.budget.p_ncl}};
    j["divide_pair_budget"] = env.divide_pair_budget;
    json robots = json::array();
    for (const RobotSpec& r : env.robots) robots.push_back(robot_to_json(r));
    j["robots"] = robots;
    json pairs = json::array();
    for (const ExteroPair& p : env.pairs) {
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"C_ext", matrix_to_json(p.C_ext)},
                         {"R_ext", matrix_to_json(p.R_ext)},
                         {"r_ext", p.r_ext}});
    }
    j["pairs"] = pairs;
    return j;
}

Environment environment_from_json_obj(const json& j) {
    Environment env;
    try {
        env.name = j.value("name", "");
        env.notes = j.value("notes", "");
        env.bounds.lo = vector_from_json(j.at("workspace").at("min"), "workspace.min");
        env.bounds.hi = vector_from_json(j.at("workspace").at("max"), "workspace.max");
        std::size_t oi = 0;
        for (const auto& o : j.value("obstacles", json::array())) {
            env.obstacles.push_back(obstacle_from_json(o, "obstacles[" + std::to_string(oi++) + "]"));
        }
        const auto& b = j.at("budget");
        env.budget.p_safe = b.at("p_safe").get<double>();
        env.budget.p_obs = b.at("p_obs").get<double>();
        env.budget.p_rob = b.at("p_rob").get<double>();
        env.budget.p_ncl = b.at("p_ncl").get<double>();
        env.divide_pair_budget = j.value("divide_pair_budget", true);
        std::size_t ri = 0;
        for (const auto& r : j.at("robots")) {
            env.robots.push_back(robot_from_json(r, "robots[" + std::to_string(ri++) + "]"));
        }
        for (const auto& p : j.value("pairs", json::array())) {
            ExteroPair ep;
            ep.i = p.at("i").get<int>();
            ep.j = p.at("j").get<int>();
            ep.C_ext = matrix_from_json(p.at("C_ext"), "pairs.C_ext");
            ep.R_ext = matrix_from_json(p.at("R_ext"), "pairs.R_ext");
            ep.r_ext = p.at("r_ext").get<double>();
            env.pairs.push_back(std::move(ep));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("environment parse: ") + e.what());
    }
    env.validate();
    return env;
}

json plan_to_json_obj(const PlanFile& pf, const TeamModel& model) {
    json j;
    j["environment"] = environment_to_json_obj(pf.env);
    json controls = json::array();
    json states = json::array();
    for (int r = 0; r < model.num_robots(); ++r) {
        controls.push_back(matrix_to_json(pf.plan.controls[static_cast<std::size_t>(r)]));
        states.push_back(matrix_to_json(pf.plan.states[static_cast<std::size_t>(r)]));
    }
    j["plan"] = {{"controls", controls}, {"states", states}, {"schedule", pf.plan.schedule.active_pairs}};
    j["config"] = {{"planner", to_string(pf.config.planner)},
                   {"bias", to_string(pf.config.bias)},
                   {"epsilon", pf.config.epsilon},
                   {"goal_bias", pf.config.goal_bias},
                   {"edge_steps", pf.config.edge_steps},
                   {"seed", pf.config.rng_seed}};
    j["iterations"] = pf.iterations;
    return j;
}

} // namespace

TeamModel Environment::team_model(bool with_extero) const {
    std::vector<RobotModel> models;
    models.reserve(robots.size());
    for (const RobotSpec& r : robots) models.push_back(r.model);
    return TeamModel::compose(std::move(models), with_extero ? pairs : std::vector<ExteroPair>{});
}

PlanningProblem Environment::problem() const {
    PlanningProblem p;
    p.ctx.bounds = bounds;
    p.ctx.obstacles = obstacles;
    p.ctx.budget = budget;
    p.ctx.divide_pair_budget = divide_pair_budget;

    Index n_total = 0;
    for (const RobotSpec& r : robots) n_total += r.model.state_dim();
    p.start_mean = Vector::Zero(n_total);
    p.start_sigma = Matrix::Zero(n_total, n_total);
    Index off = 0;
    for (const RobotSpec& r : robots) {
        const Index n = r.model.state_dim();
        p.start_mean.segment(off, n) = r.start.mean();
        p.start_sigma.block(off, off, n, n) = r.start.covariance();
        off += n;
    }
    for (const RobotSpec& r : robots) p.goals.push_back(r.goal);
    return p;
}

void Environment::validate() const {
    budget.validate();
    if (bounds.lo.size() != bounds.hi.size() || bounds.lo.size() == 0) {
        throw ConfigError("workspace: min/max dimension mismatch");
    }
    if (((bounds.hi - bounds.lo).array() <= 0.0).any()) throw ConfigError("workspace: empty extent");
    if (robots.size() < 2) throw ConfigError("robots: at least 2 robots required");

    const Index w = bounds.lo.size();
    for (std::size_t i = 0; i < robots.size(); ++i) {
        const RobotSpec& r = robots[i];
        const std::string tag = "robots[" + std::to_string(i) + "]";
        if (static_cast<Index>(r.model.workspace_proj.size()) != w) {
            throw ConfigError(tag + ".workspace_proj: size must equal workspace dimension");
        }
        if (r.start.dim() != r.model.state_dim()) throw ConfigError(tag + ".start: dimension mismatch");
        if (r.goal.center.size() != w) throw ConfigError(tag + ".goal.center: dimension mismatch");
        if (r.goal.radius <= 0.0) throw ConfigError(tag + ".goal.radius: must be positive");
        if (!bounds.contains_point(r.goal.center)) throw ConfigError(tag + ".goal: center outside workspace");
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const Obstacle& o = obstacles[i];
        const std::string tag = "obstacles[" + std::to_string(i) + "]";
        if (o.kind == Obstacle::Kind::Rect) {
            if (!bounds.contains_point(o.lo) || !bounds.contains_point(o.hi)) {
                throw ConfigError(tag + ": rectangle outside workspace");
            }
        } else if (!bounds.contains_disc(o.center, 0.0)) {
            throw ConfigError(tag + ": disc center outside workspace");
        }
    }

    // compose + root validity (obstacle clearance of every start belief)
    const TeamModel model = team_model();
    const PlanningProblem prob = problem();
    ExpectedBelief root = root_belief(prob);
    if (!valid_belief(root, model, prob.ctx, {})) {
        throw ConfigError("robots: start beliefs violate the validity constraints");
    }
}

std::string environment_to_json(const Environment& env) {
    return environment_to_json_obj(env).dump(2) + "\n";
}

Environment environment_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("environment parse: ") + e.what());
    }
    return environment_from_json_obj(j);
}

Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open environment file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return environment_from_json(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void save_environment(const Environment& env, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write environment file '" + path + "'");
    out << environment_to_json(env);
}

void save_plan(const PlanFile& pf, const TeamModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write plan file '" + path + "'");
    out << plan_to_json_obj(pf, model).dump(2) << "\n";
}

PlanFile load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open plan file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": plan parse: " + e.what());
    }

    PlanFile pf;
    try {
        pf.env = environment_from_json_obj(j.at("environment"));
        const auto& p = j.at("plan");
        for (const auto& m : p.at("controls")) pf.plan.controls.push_back(matrix_from_json(m, "plan.controls"));
        for (const auto& m : p.at("states")) pf.plan.states.push_back(matrix_from_json(m, "plan.states"));
        pf.plan.schedule.active_pairs = p.at("schedule").get<std::vector<std::vector<int>>>();
        const auto& c = j.at("config");
        pf.config.planner = planner_kind_from_string(c.at("planner").get<std::string>());
        pf.config.bias = bias_kind_from_string(c.at("bias").get<std::string>());
        pf.config.epsilon = c.at("epsilon").get<double>();
        pf.config.goal_bias = c.at("goal_bias").get<double>();
        pf.config.edge_steps = c.at("edge_steps").get<int>();
        pf.config.rng_seed = c.at("seed").get<std::uint64_t>();
        pf.iterations = j.value("iterations", std::uint64_t{0});
    } catch (const json::exception& e) {
        throw ConfigError(path + ": plan parse: " + e.what());
    }
    return pf;
}

} // namespace coplan
