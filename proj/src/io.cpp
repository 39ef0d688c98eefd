#include "dcg/io.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dcg/config.hpp"

namespace dcg {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void ensure_dir(const std::string& path) {
  if (!path.empty()) std::filesystem::create_directories(path);
}

void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string grid_csv(const FidelityGrid& g, const std::string& ax1_name,
                     const std::string& ax2_name) {
  std::ostringstream out;
  out << ax1_name << ',' << ax2_name << ",fidelity,stderr\n";
  for (Eigen::Index i = 0; i < g.ax1.size(); ++i)
    for (Eigen::Index j = 0; j < g.ax2.size(); ++j)
      out << fmt12(g.ax1(i)) << ',' << fmt12(g.ax2(j)) << ',' << fmt12(g.f(i, j)) << ','
          << fmt12(g.se(i, j)) << '\n';
  return out.str();
}

FidelityGrid read_grid_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty grid file");
  struct Row {
    double a, b, f, se;
  };
  std::vector<Row> rows;
  std::map<double, Eigen::Index> ax1, ax2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.a, &r.b, &r.f, &r.se) != 4)
      throw ConfigError(path + ": malformed grid row \"" + line + "\"");
    rows.push_back(r);
    ax1.emplace(r.a, 0);
    ax2.emplace(r.b, 0);
  }
  if (rows.empty()) throw ConfigError(path + ": no grid rows");
  FidelityGrid g;
  g.ax1.resize(static_cast<Eigen::Index>(ax1.size()));
  g.ax2.resize(static_cast<Eigen::Index>(ax2.size()));
  Eigen::Index k = 0;
  for (auto& [v, idx] : ax1) {
    idx = k;
    g.ax1(k++) = v;
  }
  k = 0;
  for (auto& [v, idx] : ax2) {
    idx = k;
    g.ax2(k++) = v;
  }
  g.f.setZero(g.ax1.size(), g.ax2.size());
  g.se.setZero(g.ax1.size(), g.ax2.size());
  for (const Row& r : rows) {
    g.f(ax1.at(r.a), ax2.at(r.b)) = r.f;
    g.se(ax1.at(r.a), ax2.at(r.b)) = r.se;
  }
  select_best_cell(g);
  return g;
}

namespace {

const char* kColumnNames[4] = {"both_noises", "gradient_noise", "exchange_noise",
                               "no_noise"};

}  // namespace

std::string table_csv(const Table1Result& t) {
  std::ostringstream out;
  out << "gate";
  for (const char* c : kColumnNames) out << ',' << c;
  out << '\n';
  for (const auto& row : t.rows) {
    out << '"' << row.label << '"';
    for (double f : row.f) out << ',' << fmt12(f);
    out << '\n';
  }
  return out.str();
}

std::string table_text(const Table1Result& t) {
  std::ostringstream out;
  out << "mean process fidelity\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-36s %12s %12s %12s %12s\n", "gate", "both",
                "gradient", "exchange", "none");
  out << buf;
  for (const auto& row : t.rows) {
    std::snprintf(buf, sizeof(buf), "%-36s %12.4f %12.4f %12.4f %12.4f\n",
                  row.label.c_str(), row.f[0], row.f[1], row.f[2], row.f[3]);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "\nscale factors: hadamard (%.4f, %.4f), identity (%.4f, %.4f)\n",
                t.beta_h[0], t.beta_h[1], t.beta_i[0], t.beta_i[1]);
  out << buf;
  return out.str();
}

std::string columns_csv(const std::vector<std::string>& headers,
                        const std::vector<Eigen::VectorXd>& cols) {
  if (headers.size() != cols.size() || cols.empty())
    throw std::invalid_argument("columns_csv: header/column mismatch");
  const Eigen::Index n = cols[0].size();
  for (const auto& c : cols)
    if (c.size() != n) throw std::invalid_argument("columns_csv: ragged columns");
  std::ostringstream out;
  for (size_t i = 0; i < headers.size(); ++i)
    out << (i ? "," : "") << headers[i];
  out << '\n';
  for (Eigen::Index k = 0; k < n; ++k) {
    for (size_t i = 0; i < cols.size(); ++i)
      out << (i ? "," : "") << fmt12(cols[i](k));
    out << '\n';
  }
  return out.str();
}

std::string waveform_csv(const Waveform& w) {
  Eigen::VectorXd t(w.samples.size());
  for (Eigen::Index k = 0; k < t.size(); ++k) t(k) = (k + 0.5) * w.dt_ns;
  const std::string value =
      w.kind == SampleKind::exchange ? "exchange_mhz" : "voltage_mv";
  return columns_csv({"t_ns", value}, {t, w.samples});
}

std::string pulse_csv(const PulseSequence& seq) {
  std::ostringstream out;
  out << "segment,j_mhz,duration_ns,role\n";
  for (size_t i = 0; i < seq.segments.size(); ++i) {
    const Segment& s = seq.segments[i];
    const char* role = s.role == SegmentRole::j1   ? "j1"
                       : s.role == SegmentRole::j2 ? "j2"
                                                   : "fixed";
    out << i << ',' << fmt12(s.j_mhz) << ',' << fmt12(s.dur_ns) << ',' << role << '\n';
  }
  return out.str();
}

std::string error_curve_csv(const ErrorCurve& ec) {
  std::ostringstream out;
  out << "t_ns,rx,ry,rz,rdotx,rdoty,rdotz\n";
  for (Eigen::Index k = 0; k < ec.t.size(); ++k) {
    out << fmt12(ec.t(k));
    for (int a = 0; a < 3; ++a) out << ',' << fmt12(ec.r(a, k));
    for (int a = 0; a < 3; ++a) out << ',' << fmt12(ec.rdot(a, k));
    out << '\n';
  }
  return out.str();
}

std::string binormal_csv(const BinormalCurve& bc) {
  std::ostringstream out;
  out << "t_ns,bx,by,bz,px,py\n";
  for (Eigen::Index k = 0; k < bc.t.size(); ++k) {
    const Eigen::Vector2d p = stereographic_project(bc.b.col(k));
    out << fmt12(bc.t(k));
    for (int a = 0; a < 3; ++a) out << ',' << fmt12(bc.b(a, k));
    out << ',' << fmt12(p.x()) << ',' << fmt12(p.y()) << '\n';
  }
  return out.str();
}

std::string scatter_csv(const std::vector<ScatterStats>& stats) {
  std::ostringstream out;
  out << "configuration,repeat,fidelity\n";
  for (const auto& s : stats)
    for (size_t r = 0; r < s.values.size(); ++r)
      out << '"' << s.label << "\"," << r << ',' << fmt12(s.values[r]) << '\n';
  return out.str();
}

void write_with_meta(const std::string& path, const std::string& content,
                     const std::string& command, const std::string& config_json) {
  write_text(path, content);
  nlohmann::ordered_json meta;
  meta["command"] = command;
  try {
    meta["config"] = nlohmann::ordered_json::parse(config_json);
  } catch (const nlohmann::json::exception&) {
    meta["config"] = config_json;
  }
  std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["written_utc"] = stamp;
  write_text(path + ".meta.json", meta.dump(2) + "\n");
}

}  // namespace dcg
