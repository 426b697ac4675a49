#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "arcgd/mlp.hpp"
#include "arcgd/rosenbrock.hpp"

namespace arcgd {

/// Embedded in every summary/metadata file so outputs are self-describing:
/// the seed plus the fully resolved settings regenerate every numeric cell.
struct Metadata {
  std::uint64_t master_seed = 42;
  std::string command;                          // subcommand / config label
  std::string version = "0.1.0";
  std::map<std::string, std::string> settings;  // resolved flag values
};

/// Header: run,optimizer,converged,iterations,final_loss,
/// final_gradient_norm,distance_to_minimum,time_s. Reals in scientific
/// notation with 9 significant digits; rows sorted by (run, optimizer).
void emit_run_csv(const std::vector<RunRecord>& records,
                  const std::filesystem::path& file);

/// Inverse of emit_run_csv (test_set is not part of the file format and is
/// left empty). Throws std::runtime_error on malformed input.
std::vector<RunRecord> parse_run_csv(const std::filesystem::path& file);

/// One object per (test_set, optimizer) with the summary fields; absent
/// averages encode as null. Keys are sorted; metadata rides along.
void emit_summary_json(const std::vector<RunSummary>& summaries,
                       const Metadata& meta, const std::filesystem::path& file);

/// Header: iteration,train_loss,train_acc,test_acc.
void emit_mlp_curve_csv(const std::vector<CurvePoint>& curve,
                        const std::filesystem::path& file);

/// Header: iteration,loss,smoothed_loss,grad_norm.
void emit_rosenbrock_trace_csv(const std::vector<TracePoint>& trace,
                               const std::filesystem::path& file);

/// Header: arch,iteration,eta_low_1,test_acc_1,eta_low_2,test_acc_2,delta.
void emit_ablation_csv(const std::vector<AblationRow>& rows,
                       const std::filesystem::path& file);

void emit_metadata_json(const Metadata& meta,
                        const std::filesystem::path& file);

}  // namespace arcgd
