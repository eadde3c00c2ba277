#include "curvednb/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace curvednb {

namespace {

using nlohmann::json;

class Problems {
 public:
  void add(const std::string& message) { messages_.push_back(message); }
  bool empty() const { return messages_.empty(); }
  [[noreturn]] void raise() const {
    std::string joined = "invalid configuration:";
    for (const std::string& m : messages_) joined += "\n  - " + m;
    throw ValidationError(joined);
  }

 private:
  std::vector<std::string> messages_;
};

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed, Problems& problems) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      problems.add(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

bool want_number(const json& obj, const char* where, const char* key,
                 Problems& problems, double& out) {
  if (!obj.at(key).is_number()) {
    problems.add(std::string(where) + "." + key + ": must be a number");
    return false;
  }
  out = obj.at(key).get<double>();
  return true;
}

bool want_int(const json& obj, const char* where, const char* key,
              Problems& problems, long long& out) {
  if (!obj.at(key).is_number_integer()) {
    problems.add(std::string(where) + "." + key + ": must be an integer");
    return false;
  }
  out = obj.at(key).get<long long>();
  return true;
}

bool want_bool(const json& obj, const char* where, const char* key,
               Problems& problems, bool& out) {
  if (!obj.at(key).is_boolean()) {
    problems.add(std::string(where) + "." + key + ": must be a boolean");
    return false;
  }
  out = obj.at(key).get<bool>();
  return true;
}

bool want_real_array(const json& obj, const char* where, const char* key,
                     Problems& problems, Vector& out) {
  const json& arr = obj.at(key);
  if (!arr.is_array()) {
    problems.add(std::string(where) + "." + key + ": must be an array");
    return false;
  }
  out.resize(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const auto& v : arr) {
    if (!v.is_number()) {
      problems.add(std::string(where) + "." + key +
                   ": entries must be numbers");
      return false;
    }
    out(i++) = v.get<double>();
  }
  return true;
}

RunConfig parse_json(const json& root) {
  Problems problems;
  RunConfig cfg;

  if (!root.is_object()) {
    problems.add("top level: must be a JSON object");
    problems.raise();
  }
  check_keys(root, "top level",
             {"sigma", "k", "masses", "r", "alphas", "angular_velocity",
              "integration", "solve", "sweep", "probe", "boundedness",
              "cluster", "catalog"},
             problems);

  // Required space/mass block.
  for (const char* key : {"sigma", "k", "masses"}) {
    if (!root.contains(key)) {
      problems.add(std::string("missing required key '") + key + "'");
    }
  }

  if (root.contains("sigma")) {
    long long sigma = 0;
    if (want_int(root, "top level", "sigma", problems, sigma)) {
      if (sigma != 1 && sigma != -1) {
        problems.add("sigma: must be +1 or -1");
      } else {
        cfg.space.sigma = static_cast<int>(sigma);
      }
    }
  }
  if (root.contains("k")) {
    long long k = 0;
    if (want_int(root, "top level", "k", problems, k)) {
      if (k < 2) {
        problems.add("k: must be >= 2");
      } else {
        cfg.space.k = static_cast<int>(k);
      }
    }
  }
  if (root.contains("masses")) {
    Vector masses;
    if (want_real_array(root, "top level", "masses", problems, masses)) {
      if (masses.size() == 0) {
        problems.add("masses: must not be empty");
      }
      for (Eigen::Index i = 0; i < masses.size(); ++i) {
        if (!(masses(i) > 0.0)) {
          problems.add("masses[" + std::to_string(i) +
                       "]: must be strictly positive");
        }
      }
      cfg.masses = masses;
    }
  }

  if (root.contains("r")) {
    double r = 0.0;
    if (want_number(root, "top level", "r", problems, r)) {
      if (!(r > 0.0)) {
        problems.add("r: must be > 0");
      } else {
        cfg.r = r;
      }
    }
  }
  if (root.contains("alphas")) {
    Vector alphas;
    if (want_real_array(root, "top level", "alphas", problems, alphas)) {
      cfg.alphas = alphas;
    }
  }
  if (root.contains("angular_velocity")) {
    double a = 0.0;
    if (want_number(root, "top level", "angular_velocity", problems, a)) {
      if (a < 0.0) {
        problems.add("angular_velocity: must be >= 0");
      } else {
        cfg.angular_velocity = a;
      }
    }
  }

  if (root.contains("integration")) {
    const json& obj = root.at("integration");
    if (!obj.is_object()) {
      problems.add("integration: must be an object");
    } else {
      check_keys(obj, "integration",
                 {"step_size", "t_end", "output_stride", "projection"},
                 problems);
      IntegrationConfig ic;
      for (const char* key : {"step_size", "t_end"}) {
        if (!obj.contains(key)) {
          problems.add(std::string("integration: missing key '") + key + "'");
        }
      }
      if (obj.contains("step_size")) {
        double v = 0.0;
        if (want_number(obj, "integration", "step_size", problems, v)) {
          if (!(v > 0.0)) {
            problems.add("integration.step_size: must be > 0");
          } else {
            ic.step_size = v;
          }
        }
      }
      if (obj.contains("t_end")) {
        double v = 0.0;
        if (want_number(obj, "integration", "t_end", problems, v)) {
          if (!(v > 0.0)) {
            problems.add("integration.t_end: must be > 0");
          } else {
            ic.t_end = v;
          }
        }
      }
      if (obj.contains("output_stride")) {
        long long v = 0;
        if (want_int(obj, "integration", "output_stride", problems, v)) {
          if (v < 1) {
            problems.add("integration.output_stride: must be >= 1");
          } else {
            ic.output_stride = static_cast<int>(v);
          }
        }
      }
      if (obj.contains("projection")) {
        want_bool(obj, "integration", "projection", problems,
                  ic.projection_enabled);
      }
      if (obj.contains("step_size") && obj.contains("t_end") &&
          !(ic.step_size < ic.t_end)) {
        problems.add("integration: step_size must be < t_end");
      }
      cfg.integration = ic;
    }
  }

  if (root.contains("solve")) {
    const json& obj = root.at("solve");
    if (!obj.is_object()) {
      problems.add("solve: must be an object");
    } else {
      check_keys(obj, "solve", {"initial_alphas", "max_iterations", "tolerance"},
                 problems);
      SolveSection sec;
      if (!obj.contains("initial_alphas")) {
        problems.add("solve: missing key 'initial_alphas'");
      } else {
        want_real_array(obj, "solve", "initial_alphas", problems,
                        sec.initial_alphas);
      }
      if (obj.contains("max_iterations")) {
        long long v = 0;
        if (want_int(obj, "solve", "max_iterations", problems, v)) {
          if (v < 1) {
            problems.add("solve.max_iterations: must be >= 1");
          } else {
            sec.max_iterations = static_cast<int>(v);
          }
        }
      }
      if (obj.contains("tolerance")) {
        double v = 0.0;
        if (want_number(obj, "solve", "tolerance", problems, v)) {
          if (!(v > 0.0)) {
            problems.add("solve.tolerance: must be > 0");
          } else {
            sec.tolerance = v;
          }
        }
      }
      cfg.solve = sec;
    }
  }

  if (root.contains("sweep")) {
    const json& obj = root.at("sweep");
    if (!obj.is_object()) {
      problems.add("sweep: must be an object");
    } else {
      check_keys(obj, "sweep",
                 {"r_grid", "starts", "seed", "min_separation",
                  "fixed_angular_velocity", "require_consistency",
                  "require_rigidity"},
                 problems);
      SweepSection sec;
      if (!obj.contains("r_grid")) {
        problems.add("sweep: missing key 'r_grid'");
      } else {
        Vector grid;
        if (want_real_array(obj, "sweep", "r_grid", problems, grid)) {
          for (Eigen::Index i = 0; i < grid.size(); ++i) {
            if (!(grid(i) > 0.0)) {
              problems.add("sweep.r_grid[" + std::to_string(i) +
                           "]: must be > 0");
            }
            sec.r_grid.push_back(grid(i));
          }
        }
      }
      if (obj.contains("starts")) {
        long long v = 0;
        if (want_int(obj, "sweep", "starts", problems, v)) {
          if (v < 1) {
            problems.add("sweep.starts: must be >= 1");
          } else {
            sec.starts = static_cast<int>(v);
          }
        }
      }
      if (obj.contains("seed")) {
        if (!obj.at("seed").is_number_unsigned() &&
            !obj.at("seed").is_number_integer()) {
          problems.add("sweep.seed: must be a nonnegative integer");
        } else {
          const long long v = obj.at("seed").get<long long>();
          if (v < 0 && !obj.at("seed").is_number_unsigned()) {
            problems.add("sweep.seed: must be a nonnegative integer");
          } else {
            sec.seed = obj.at("seed").get<std::uint64_t>();
          }
        }
      }
      if (obj.contains("min_separation")) {
        double v = 0.0;
        if (want_number(obj, "sweep", "min_separation", problems, v)) {
          if (!(v > 0.0)) {
            problems.add("sweep.min_separation: must be > 0");
          } else {
            sec.min_separation = v;
          }
        }
      }
      if (obj.contains("fixed_angular_velocity")) {
        double v = 0.0;
        if (want_number(obj, "sweep", "fixed_angular_velocity", problems, v)) {
          if (v < 0.0) {
            problems.add("sweep.fixed_angular_velocity: must be >= 0");
          } else {
            sec.fixed_angular_velocity = v;
          }
        }
      }
      if (obj.contains("require_consistency")) {
        want_bool(obj, "sweep", "require_consistency", problems,
                  sec.require_consistency);
      }
      if (obj.contains("require_rigidity")) {
        want_bool(obj, "sweep", "require_rigidity", problems,
                  sec.require_rigidity);
      }
      cfg.sweep = sec;
    }
  }

  if (root.contains("probe")) {
    if (!root.at("probe").is_string()) {
      problems.add("probe: must be a string");
    } else {
      const std::string name = root.at("probe").get<std::string>();
      if (name != "min-distance" && name != "boundedness" &&
          name != "cluster-blowup") {
        problems.add(
            "probe: must be one of 'min-distance', 'boundedness', "
            "'cluster-blowup'");
      } else {
        cfg.probe = name;
      }
    }
  }

  if (root.contains("boundedness")) {
    const json& obj = root.at("boundedness");
    if (!obj.is_object()) {
      problems.add("boundedness: must be an object");
    } else {
      check_keys(obj, "boundedness",
                 {"A_fixed", "family", "r_min", "r_max", "grid_points"},
                 problems);
      BoundednessSection sec;
      for (const char* key : {"A_fixed", "r_min", "r_max"}) {
        if (!obj.contains(key)) {
          problems.add(std::string("boundedness: missing key '") + key + "'");
        }
      }
      if (obj.contains("A_fixed")) {
        double v = 0.0;
        if (want_number(obj, "boundedness", "A_fixed", problems, v)) {
          if (!(v > 0.0)) {
            problems.add("boundedness.A_fixed: must be > 0");
          } else {
            sec.a_fixed = v;
          }
        }
      }
      if (obj.contains("family")) {
        if (!obj.at("family").is_string()) {
          problems.add("boundedness.family: must be a string");
        } else {
          const std::string fam = obj.at("family").get<std::string>();
          if (fam == "polygon") {
            sec.family = BoundednessFamily::polygon;
          } else if (fam == "solver") {
            sec.family = BoundednessFamily::solver;
          } else {
            problems.add("boundedness.family: must be 'polygon' or 'solver'");
          }
        }
      }
      if (obj.contains("r_min")) {
        want_number(obj, "boundedness", "r_min", problems, sec.r_min);
      }
      if (obj.contains("r_max")) {
        want_number(obj, "boundedness", "r_max", problems, sec.r_max);
      }
      if (obj.contains("r_min") && obj.contains("r_max") &&
          !(sec.r_min > 0.0 && sec.r_max > sec.r_min)) {
        problems.add("boundedness: need 0 < r_min < r_max");
      }
      if (obj.contains("grid_points")) {
        long long v = 0;
        if (want_int(obj, "boundedness", "grid_points", problems, v)) {
          if (v < 2) {
            problems.add("boundedness.grid_points: must be >= 2");
          } else {
            sec.grid_points = static_cast<int>(v);
          }
        }
      }
      cfg.boundedness = sec;
    }
  }

  if (root.contains("cluster")) {
    const json& obj = root.at("cluster");
    if (!obj.is_object()) {
      problems.add("cluster: must be an object");
    } else {
      check_keys(obj, "cluster", {"delta_grid"}, problems);
      ClusterSection sec;
      if (!obj.contains("delta_grid")) {
        problems.add("cluster: missing key 'delta_grid'");
      } else {
        Vector grid;
        if (want_real_array(obj, "cluster", "delta_grid", problems, grid)) {
          for (Eigen::Index i = 0; i < grid.size(); ++i) {
            if (!(grid(i) > 0.0)) {
              problems.add("cluster.delta_grid[" + std::to_string(i) +
                           "]: must be > 0");
            }
            sec.delta_grid.push_back(grid(i));
          }
        }
      }
      cfg.cluster = sec;
    }
  }

  if (root.contains("catalog")) {
    if (!root.at("catalog").is_string()) {
      problems.add("catalog: must be a string path");
    } else {
      cfg.catalog = root.at("catalog").get<std::string>();
    }
  }

  if (!problems.empty()) problems.raise();
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  return parse_json(root);
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in && !in.eof()) {
    throw IoError("cannot read config file '" + path + "'");
  }
  return parse_config_text(buffer.str());
}

}  // namespace curvednb
