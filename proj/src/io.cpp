#include "regfir/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace regfir {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    while (used < text.size() &&
           std::isspace(static_cast<unsigned char>(text[used])))
      ++used;
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad number '" + text + "' in " + where);
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  if (data.u.size() != data.y.size())
    throw std::invalid_argument("input and output lengths differ");
  std::ofstream out = open_out(path);
  out << "u,y\n";
  for (int t = 0; t < data.u.size(); ++t)
    out << format_double(data.u(t)) << ',' << format_double(data.y(t))
        << '\n';
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<double> us, ys;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.find_first_not_of("uy, \t") == std::string::npos)
      continue;  // header
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw std::runtime_error("expected two columns in " + path + " line " +
                               std::to_string(line_no));
    const std::string where = path + " line " + std::to_string(line_no);
    us.push_back(parse_double(cells[0], where));
    ys.push_back(parse_double(cells[1], where));
  }
  if (us.empty()) throw std::runtime_error("no samples in " + path);
  Dataset data;
  data.u = Eigen::Map<const Vector>(us.data(), us.size());
  data.y = Eigen::Map<const Vector>(ys.data(), ys.size());
  return data;
}

void write_vector_csv(const std::string& path, const std::string& header,
                      const Vector& values) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  for (int i = 0; i < values.size(); ++i)
    out << format_double(values(i)) << '\n';
}

namespace {

GridSpec grid_from_json(const Json& j) {
  GridSpec grid = GridSpec::desk();
  if (j.contains("orders")) grid.orders = j["orders"].get<std::vector<int>>();
  if (j.contains("edges"))
    grid.edges = j["edges"].get<std::vector<double>>();
  if (j.contains("alphas"))
    grid.alphas = j["alphas"].get<std::vector<double>>();
  if (j.contains("lambdas"))
    grid.lambdas = j["lambdas"].get<std::vector<double>>();
  if (j.contains("kinds")) {
    grid.kinds.clear();
    for (const auto& name : j["kinds"])
      grid.kinds.push_back(band_kind_from_string(name.get<std::string>()));
  }
  return grid;
}

Json grid_to_json(const GridSpec& grid) {
  Json j;
  j["orders"] = grid.orders;
  j["edges"] = grid.edges;
  j["alphas"] = grid.alphas;
  j["lambdas"] = grid.lambdas;
  std::vector<std::string> kinds;
  for (BandKind k : grid.kinds) kinds.push_back(to_string(k));
  j["kinds"] = kinds;
  return j;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  ExperimentConfig config;
  try {
    if (j.contains("system")) config.system = j["system"].get<std::string>();
    if (j.contains("n_samples")) config.n_samples = j["n_samples"].get<int>();
    if (j.contains("input_sigma"))
      config.input_sigma = j["input_sigma"].get<double>();
    if (j.contains("noise_sigma"))
      config.noise_sigma = j["noise_sigma"].get<double>();
    if (j.contains("model_order"))
      config.model_order = j["model_order"].get<int>();
    if (j.contains("n_validation"))
      config.n_validation = j["n_validation"].get<int>();
    if (j.contains("runs")) config.runs = j["runs"].get<int>();
    if (j.contains("base_seed"))
      config.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("cv_folds")) config.cv_folds = j["cv_folds"].get<int>();
    if (j.contains("methods"))
      config.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("grid")) config.grid = grid_from_json(j["grid"]);
    if (j.contains("tailored_edges"))
      config.tailored_edges =
          j["tailored_edges"].get<std::vector<double>>();
    if (j.contains("refine")) config.refine = j["refine"].get<bool>();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  validate(config);
  return config;
}

std::string config_to_json(const ExperimentConfig& config) {
  Json j;
  j["system"] = config.system;
  j["n_samples"] = config.n_samples;
  j["input_sigma"] = config.input_sigma;
  j["noise_sigma"] = config.noise_sigma;
  j["model_order"] = config.model_order;
  j["n_validation"] = config.n_validation;
  j["runs"] = config.runs;
  j["base_seed"] = config.base_seed;
  j["cv_folds"] = config.cv_folds;
  j["methods"] = config.methods;
  j["grid"] = grid_to_json(config.grid);
  j["tailored_edges"] = config.tailored_edges;
  j["refine"] = config.refine;
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

}  // namespace regfir
