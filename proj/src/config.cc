// Copyright 2026 The Smoothmart Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "smoothmart/config.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "smoothmart/experiment.h"

namespace smoothmart {
namespace {

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += (out.empty() ? "" : "\n") + s;
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double ParseDouble(const std::string& text) {
  const std::string t = Trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw InputError("not a number: '" + text + "'");
  }
  return v;
}

// "name(a, b)" -> name and numbers.
std::pair<std::string, std::vector<double>> SplitCall(const std::string& text) {
  const std::string t = Trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) return {t, {}};
  if (t.back() != ')') throw InputError("malformed call '" + text + "'");
  std::vector<double> args;
  std::string inner = t.substr(open + 1, t.size() - open - 2);
  std::replace(inner.begin(), inner.end(), ',', ' ');
  std::istringstream in(inner);
  std::string tok;
  while (in >> tok) args.push_back(ParseDouble(tok));
  return {Trim(t.substr(0, open)), args};
}

bool ValidName(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
           ch == '-' || ch == '.';
  });
}

class Parser {
 public:
  void Issue(const YAML::Node& node, const std::string& msg) {
    std::ostringstream out;
    out << "line " << node.Mark().line + 1 << ": " << msg;
    issues_.push_back(out.str());
  }
  const std::vector<std::string>& issues() const { return issues_; }

  template <typename T>
  std::optional<T> Get(const YAML::Node& node, const std::string& what) {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      Issue(node, what + " has the wrong type");
      return std::nullopt;
    }
  }

  void CheckKeys(const YAML::Node& map, const std::set<std::string>& allowed,
                 const std::string& where) {
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        Issue(kv.first, "unknown key '" + key + "' in " + where);
      }
    }
  }

  std::optional<std::vector<double>> Grid(const YAML::Node& node,
                                          const std::string& key) {
    if (!node.IsSequence() || node.size() == 0) {
      Issue(node, key + " must be a nonempty list");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& v : node) {
      const auto x = Get<double>(v, key + " entry");
      if (!x) return std::nullopt;
      out.push_back(*x);
    }
    if (!std::is_sorted(out.begin(), out.end())) {
      Issue(node, key + " must be sorted ascending");
      return std::nullopt;
    }
    return out;
  }

  std::optional<SpaceSpec> Space(const YAML::Node& node) {
    if (!node.IsMap()) {
      Issue(node, "space must be a map");
      return std::nullopt;
    }
    CheckKeys(node, {"kind", "p", "dim"}, "space");
    const auto kind = node["kind"] ? Get<std::string>(node["kind"], "space.kind")
                                   : std::optional<std::string>("euclidean");
    const auto dim = node["dim"] ? Get<int>(node["dim"], "space.dim")
                                 : std::optional<int>(1);
    if (!kind || !dim) return std::nullopt;
    try {
      if (*kind == "euclidean") {
        if (node["p"] && node["p"].as<double>() != 2.0) {
          Issue(node["p"], "euclidean space forces p = 2");
          return std::nullopt;
        }
        return SpaceSpec::Euclidean(*dim);
      }
      if (*kind == "lp") {
        if (!node["p"]) {
          Issue(node, "lp space needs p");
          return std::nullopt;
        }
        const auto p = Get<double>(node["p"], "space.p");
        if (!p) return std::nullopt;
        return SpaceSpec::Lp(*p, *dim);
      }
      Issue(node["kind"], "unknown space kind '" + *kind + "'");
    } catch (const YAML::Exception&) {
      Issue(node, "space.p has the wrong type");
    } catch (const InputError& e) {
      Issue(node, e.what());
    }
    return std::nullopt;
  }

  std::optional<NamedGenerator> Generator(const YAML::Node& node) {
    if (!node.IsMap()) {
      Issue(node, "generator entries must be maps");
      return std::nullopt;
    }
    CheckKeys(node,
              {"name", "kind", "horizon", "rule", "magnitude", "w_rule",
               "w_scale"},
              "generator");
    NamedGenerator out;
    bool ok = true;
    if (!node["name"]) {
      Issue(node, "generator needs a name");
      ok = false;
    } else if (auto name = Get<std::string>(node["name"], "name")) {
      out.name = *name;
      if (!ValidName(out.name)) {
        Issue(node["name"], "generator name '" + out.name +
                                "' must use [A-Za-z0-9_.-]");
        ok = false;
      }
    }
    const std::string kind =
        node["kind"] ? node["kind"].as<std::string>("") : "paley_walsh";
    if (kind == "paley_walsh") {
      out.spec.kind = GeneratorKind::kPaleyWalsh;
    } else if (kind == "cond_symmetric") {
      out.spec.kind = GeneratorKind::kCondSymmetric;
    } else if (kind == "predictable_bounded") {
      out.spec.kind = GeneratorKind::kPredictableBounded;
    } else {
      Issue(node["kind"], "unknown generator kind '" + kind + "'");
      ok = false;
    }
    if (!node["horizon"]) {
      Issue(node, "generator needs a horizon");
      ok = false;
    } else if (auto h = Get<int>(node["horizon"], "horizon")) {
      out.spec.horizon = *h;
      if (*h < 1) {
        Issue(node["horizon"], "horizon must be >= 1");
        ok = false;
      }
    } else {
      ok = false;
    }
    if (!node["rule"]) {
      Issue(node, "generator needs a rule");
      ok = false;
    } else {
      try {
        out.spec.rule = ParseRule(node["rule"].as<std::string>());
      } catch (const std::exception& e) {
        Issue(node["rule"], e.what());
        ok = false;
      }
    }
    if (node["magnitude"]) {
      try {
        out.spec.magnitude = ParseMagnitude(node["magnitude"].as<std::string>());
      } catch (const std::exception& e) {
        Issue(node["magnitude"], e.what());
        ok = false;
      }
    }
    if (node["w_rule"]) {
      const std::string w = node["w_rule"].as<std::string>("");
      if (w == "tight") {
        out.spec.w_rule.kind = WRuleKind::kTight;
      } else if (w == "sup") {
        out.spec.w_rule.kind = WRuleKind::kSup;
      } else {
        Issue(node["w_rule"], "unknown w_rule '" + w + "'");
        ok = false;
      }
    }
    if (node["w_scale"]) {
      const auto s = Get<double>(node["w_scale"], "w_scale");
      if (!s || !(*s > 0.0)) {
        if (s) Issue(node["w_scale"], "w_scale must be > 0");
        ok = false;
      } else {
        out.spec.w_rule.scale = *s;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<SuiteEntry> Suite(const YAML::Node& node,
                                  const std::set<std::string>& gen_names) {
    if (!node.IsMap() || !node["id"]) {
      Issue(node, "suite entries must be maps with an id");
      return std::nullopt;
    }
    SuiteEntry out;
    out.line = node.Mark().line + 1;
    out.id = node["id"].as<std::string>("");
    const SuiteInfo* info = FindSuite(out.id);
    if (info == nullptr) {
      Issue(node["id"], "unknown suite '" + out.id + "'");
      return std::nullopt;
    }
    std::set<std::string> allowed = {"id", "trials", "generators",
                                     "sampling"};
    allowed.insert(info->scalar_keys.begin(), info->scalar_keys.end());
    allowed.insert(info->grid_keys.begin(), info->grid_keys.end());
    CheckKeys(node, allowed, "suite " + out.id);
    bool ok = true;
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key) || key == "id") continue;
      if (key == "trials") {
        const auto t = Get<long long>(kv.second, "trials");
        if (!t || *t < 1) {
          if (t) Issue(kv.second, "trials must be >= 1");
          ok = false;
        } else {
          out.trials = static_cast<std::uint64_t>(*t);
        }
      } else if (key == "generators") {
        if (!kv.second.IsSequence()) {
          Issue(kv.second, "generators must be a list of names");
          ok = false;
          continue;
        }
        for (const auto& g : kv.second) {
          const std::string name = g.as<std::string>("");
          if (!gen_names.count(name)) {
            Issue(g, "unknown generator '" + name + "'");
            ok = false;
          }
          out.generators.push_back(name);
        }
      } else if (key == "sampling") {
        out.sampling = kv.second.as<std::string>("");
        if (out.sampling != "monte_carlo" && out.sampling != "exhaustive" &&
            out.sampling != "auto") {
          Issue(kv.second, "unknown sampling '" + out.sampling + "'");
          ok = false;
        }
      } else if (std::count(info->grid_keys.begin(), info->grid_keys.end(),
                            key)) {
        if (auto g = Grid(kv.second, key)) {
          out.grids[key] = *g;
        } else {
          ok = false;
        }
      } else if (auto v = Get<double>(kv.second, key)) {
        out.scalars[key] = *v;
      } else {
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

 private:
  std::vector<std::string> issues_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : InputError(Join(issues)), issues_(std::move(issues)) {}

double SuiteEntry::Scalar(const std::string& key, double fallback) const {
  const auto it = scalars.find(key);
  return it == scalars.end() ? fallback : it->second;
}

const std::vector<double>* SuiteEntry::Grid(const std::string& key) const {
  const auto it = grids.find(key);
  return it == grids.end() ? nullptr : &it->second;
}

StepRule ParseRule(const std::string& text) {
  const auto [name, args] = SplitCall(text);
  return StepRule::Parse(name, args);
}

Magnitude ParseMagnitude(const std::string& text) {
  const auto [name, args] = SplitCall(text);
  Magnitude m;
  if (name == "unit" && args.empty()) {
    m.law = MagnitudeLaw::kUnit;
  } else if (name == "uniform" && args.empty()) {
    m.law = MagnitudeLaw::kUniform;
  } else if (name == "two_point" && args.size() <= 1) {
    m.law = MagnitudeLaw::kTwoPoint;
    if (!args.empty()) m.low = args[0];
    if (!(m.low >= 0.0 && m.low <= 1.0)) {
      throw InputError("two_point low value must lie in [0, 1]");
    }
  } else {
    throw InputError("unknown magnitude law '" + text + "'");
  }
  return m;
}

ExperimentConfig ParseConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream out;
    out << "line " << e.mark.line + 1 << ": " << e.msg;
    throw ConfigError({out.str()});
  }
  if (!root.IsMap()) throw ConfigError({"line 1: config must be a map"});

  Parser parser;
  ExperimentConfig cfg;
  parser.CheckKeys(root,
                   {"seed", "trials", "space", "constants", "generators",
                    "suites", "output"},
                   "config");
  if (!root["seed"]) {
    parser.Issue(root, "seed is mandatory");
  } else if (auto s = parser.Get<std::uint64_t>(root["seed"], "seed")) {
    cfg.seed = *s;
  }
  if (root["trials"]) {
    const auto t = parser.Get<long long>(root["trials"], "trials");
    if (t && *t >= 1) {
      cfg.trials = static_cast<std::uint64_t>(*t);
    } else if (t) {
      parser.Issue(root["trials"], "trials must be >= 1");
    }
  }
  if (root["space"]) {
    if (auto s = parser.Space(root["space"])) cfg.space = *s;
  }
  if (const YAML::Node c = root["constants"]) {
    parser.CheckKeys(c, {"c", "K", "c_univ", "s"}, "constants");
    if (c["c"]) cfg.constants.c = parser.Get<double>(c["c"], "constants.c");
    if (c["K"]) cfg.constants.K = parser.Get<double>(c["K"], "constants.K");
    if (c["c_univ"]) {
      cfg.constants.c_univ =
          parser.Get<double>(c["c_univ"], "c_univ").value_or(1.0);
    }
    if (c["s"]) cfg.constants.s = parser.Get<double>(c["s"], "s").value_or(0.5);
  }
  std::set<std::string> names;
  if (const YAML::Node gens = root["generators"]) {
    if (!gens.IsSequence()) parser.Issue(gens, "generators must be a list");
    for (const auto& g : gens) {
      if (auto gen = parser.Generator(g)) {
        if (!names.insert(gen->name).second) {
          parser.Issue(g, "duplicate generator name '" + gen->name + "'");
        }
        cfg.generators.push_back(*gen);
      }
    }
  }
  if (!root["suites"] || !root["suites"].IsSequence() ||
      root["suites"].size() == 0) {
    parser.Issue(root, "suites must be a nonempty list");
  } else {
    for (const auto& s : root["suites"]) {
      if (auto suite = parser.Suite(s, names)) cfg.suites.push_back(*suite);
    }
  }
  if (root["output"]) {
    cfg.output_dir = root["output"].as<std::string>("");
  }
  if (!parser.issues().empty()) throw ConfigError(parser.issues());
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

}  // namespace smoothmart
