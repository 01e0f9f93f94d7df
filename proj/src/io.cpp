#include "oselab/io.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace oselab {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void dump_value(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_value(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_value(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

std::string rational_string(const Rational& r) {
  std::ostringstream oss;
  oss << boost::multiprecision::numerator(r) << '/' << boost::multiprecision::denominator(r);
  return oss.str();
}

Rational rational_from_string(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse rational value: " + s);
  }
}

}  // namespace

std::string dump_sorted(const json& j) {
  std::string out;
  dump_value(j, out);
  return out;
}

json number_17g(double x) { return json(x); }

json map_to_json(const PiecewiseAffineMap& map) {
  json j;
  j["cells"] = map.partition().cells;
  j["circle"] = map.partition().circle;
  json slopes = json::array(), offsets = json::array();
  for (int c = 0; c < map.partition().cells; ++c) {
    slopes.push_back(rational_string(map.slope(c)));
    offsets.push_back(rational_string(map.offset(c)));
  }
  j["slopes"] = std::move(slopes);
  j["offsets"] = std::move(offsets);
  return j;
}

PiecewiseAffineMap map_from_json(const json& spec) {
  if (!spec.contains("cells") || !spec.contains("slopes") || !spec.contains("offsets"))
    throw ConfigError("map spec needs cells, slopes and offsets fields");
  UniformPartition part{spec.at("cells").get<int>(), spec.value("circle", true)};
  std::vector<Rational> slopes, offsets;
  for (const auto& s : spec.at("slopes")) slopes.push_back(rational_from_string(s.get<std::string>()));
  for (const auto& s : spec.at("offsets")) offsets.push_back(rational_from_string(s.get<std::string>()));
  return PiecewiseAffineMap(part, std::move(slopes), std::move(offsets));
}

Driver driver_from_json(const json& spec) {
  const std::string type = spec.value("type", "");
  if (type == "periodic") {
    return Driver::periodic(spec.at("word").get<std::vector<int>>());
  }
  if (type == "pi_sft") {
    return coherent_sequence_driver(spec.value("shift", std::int64_t{120}), spec.value("anchor", 1));
  }
  if (type == "explicit") {
    return Driver::explicit_sequence(spec.at("symbols").get<std::vector<int>>(),
                                     spec.value("origin", std::int64_t{0}));
  }
  throw ConfigError("driver spec type must be periodic, pi_sft or explicit");
}

json spectrum_to_json(const SpectrumReport& report) {
  json eigs = json::array();
  for (const auto& e : report.eigenvalues) eigs.push_back({{"re", e.real()}, {"im", e.imag()}});
  json j;
  j["eigenvalues"] = std::move(eigs);
  json exps = json::array();
  for (double m : report.moduli) exps.push_back(m);
  j["moduli"] = std::move(exps);
  j["multiplicities"] = report.multiplicities;
  return j;
}

json lyapunov_to_json(const LyapunovEstimate& estimate) {
  json exps = json::array();
  for (double e : estimate.exponents) {
    if (is_bottom(e))
      exps.push_back(nullptr);
    else
      exps.push_back(e);
  }
  json j;
  j["exponents"] = std::move(exps);
  j["multiplicities"] = estimate.multiplicities;
  return j;
}

json stepfn_to_json(const StepFunction& f) {
  json j;
  j["cells"] = f.partition.cells;
  j["values"] = f.values;
  return j;
}

StepFunction stepfn_from_json(const json& spec) {
  StepFunction f{{spec.at("cells").get<int>(), spec.value("circle", true)},
                 spec.at("values").get<std::vector<double>>()};
  if (static_cast<int>(f.values.size()) != f.partition.cells)
    throw ConfigError("step function value count does not match cell count");
  return f;
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open temp file for " + path.string());
    out << contents;
  }
  fs::rename(tmp, path);
}

}  // namespace oselab
