#include "arcgd/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace arcgd {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
  if (file.has_parent_path())
    std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad number: " + s);
  return v;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

nlohmann::json metadata_json(const Metadata& meta) {
  nlohmann::json j;
  j["master_seed"] = meta.master_seed;
  j["command"] = meta.command;
  j["version"] = meta.version;
  nlohmann::json settings = nlohmann::json::object();
  for (const auto& [key, value] : meta.settings) settings[key] = value;
  j["settings"] = settings;
  return j;
}

}  // namespace

void emit_run_csv(const std::vector<RunRecord>& records,
                  const std::filesystem::path& file) {
  std::vector<RunRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     if (a.run_index != b.run_index)
                       return a.run_index < b.run_index;
                     return a.optimizer < b.optimizer;
                   });

  std::ofstream out = open_out(file);
  out << "run,optimizer,converged,iterations,final_loss,final_gradient_norm,"
         "distance_to_minimum,time_s\n";
  for (const RunRecord& r : sorted) {
    out << r.run_index << ',' << r.optimizer << ','
        << (r.converged ? "true" : "false") << ',' << r.iterations << ','
        << sci(r.final_loss) << ',' << sci(r.final_grad_norm) << ','
        << sci(r.distance_to_minimum) << ',' << sci(r.wall_time_s) << '\n';
  }
}

std::vector<RunRecord> parse_run_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot read " + file.string());

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(file.string() + ": empty file");
  if (line !=
      "run,optimizer,converged,iterations,final_loss,final_gradient_norm,"
      "distance_to_minimum,time_s")
    throw std::runtime_error(file.string() + ": unexpected header");

  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8)
      throw std::runtime_error(file.string() + ": bad row: " + line);
    RunRecord r;
    r.run_index = std::stoull(f[0]);
    r.optimizer = f[1];
    if (f[2] == "true")
      r.converged = true;
    else if (f[2] == "false")
      r.converged = false;
    else
      throw std::runtime_error(file.string() + ": bad converged flag: " + f[2]);
    r.iterations = std::stoull(f[3]);
    r.final_loss = to_double(f[4]);
    r.final_grad_norm = to_double(f[5]);
    r.distance_to_minimum = to_double(f[6]);
    r.wall_time_s = to_double(f[7]);
    records.push_back(std::move(r));
  }
  return records;
}

void emit_summary_json(const std::vector<RunSummary>& summaries,
                       const Metadata& meta,
                       const std::filesystem::path& file) {
  nlohmann::json root;
  root["metadata"] = metadata_json(meta);
  nlohmann::json list = nlohmann::json::array();
  for (const RunSummary& s : summaries) {
    nlohmann::json j;
    j["test_set"] = s.test_set;
    j["optimizer"] = s.optimizer;
    j["total_runs"] = s.total_runs;
    j["converged_runs"] = s.converged_runs;
    j["convergence_rate_pct"] = s.convergence_rate_pct;
    j["avg_iterations"] = optional_number(s.avg_iterations);
    j["avg_time_s"] = optional_number(s.avg_time_s);
    j["avg_distance"] = optional_number(s.avg_distance);
    j["avg_final_loss"] = optional_number(s.avg_final_loss);
    j["avg_final_gradnorm"] = optional_number(s.avg_final_grad_norm);
    list.push_back(j);
  }
  root["summaries"] = list;

  std::ofstream out = open_out(file);
  out << root.dump(2) << '\n';
}

void emit_mlp_curve_csv(const std::vector<CurvePoint>& curve,
                        const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  out << "iteration,train_loss,train_acc,test_acc\n";
  for (const CurvePoint& p : curve)
    out << p.iteration << ',' << sci(p.train_loss) << ',' << sci(p.train_acc)
        << ',' << sci(p.test_acc) << '\n';
}

void emit_rosenbrock_trace_csv(const std::vector<TracePoint>& trace,
                               const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  out << "iteration,loss,smoothed_loss,grad_norm\n";
  for (const TracePoint& p : trace)
    out << p.iteration << ',' << sci(p.loss) << ',' << sci(p.smoothed_loss)
        << ',' << sci(p.grad_norm) << '\n';
}

void emit_ablation_csv(const std::vector<AblationRow>& rows,
                       const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  out << "arch,iteration,eta_low_1,test_acc_1,eta_low_2,test_acc_2,delta\n";
  for (const AblationRow& r : rows)
    out << r.arch << ',' << r.iteration << ',' << sci(r.eta_low_first) << ','
        << sci(r.acc_first) << ',' << sci(r.eta_low_second) << ','
        << sci(r.acc_second) << ',' << sci(r.delta) << '\n';
}

void emit_metadata_json(const Metadata& meta,
                        const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  out << metadata_json(meta).dump(2) << '\n';
}

}  // namespace arcgd
