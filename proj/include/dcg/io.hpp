#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dcg/analysis.hpp"
#include "dcg/scqc.hpp"
#include "dcg/sim.hpp"

namespace dcg {

// All numeric artifact output goes through this: 12 significant digits.
std::string fmt12(double v);

void ensure_dir(const std::string& path);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// CSV renderers. Deterministic: rerunning with the same inputs yields
// byte-identical text (timestamps live only in the .meta.json sidecars).
std::string grid_csv(const FidelityGrid& g, const std::string& ax1_name,
                     const std::string& ax2_name);
FidelityGrid read_grid_csv(const std::string& path);

std::string table_csv(const Table1Result& t);
std::string table_text(const Table1Result& t);

std::string columns_csv(const std::vector<std::string>& headers,
                        const std::vector<Eigen::VectorXd>& cols);
std::string waveform_csv(const Waveform& w);
std::string pulse_csv(const PulseSequence& seq);
std::string error_curve_csv(const ErrorCurve& ec);
std::string binormal_csv(const BinormalCurve& bc);  // includes plane projection
std::string scatter_csv(const std::vector<ScatterStats>& stats);

// Writes `content` to path and a sidecar `<path>.meta.json` holding the
// command line, the resolved configuration, and a timestamp.
void write_with_meta(const std::string& path, const std::string& content,
                     const std::string& command, const std::string& config_json);

}  // namespace dcg
