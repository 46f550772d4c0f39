#pragma once

// Deterministic artifact writers. Floats use 17 significant digits; CSV is
// comma separated with LF endings and one header line; JSON keys are sorted.
// Each CSV gets a `<name>.meta.json` sidecar carrying the meta block.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "resbif/branch.hpp"
#include "resbif/ode.hpp"
#include "resbif/potential.hpp"
#include "resbif/scattering.hpp"
#include "resbif/spectrum.hpp"

namespace resbif::report {

inline constexpr const char* kToolVersion = "0.1.0";

std::string fmt(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  // `key` orders the rows (lexicographic on the numbers); ties keep insertion order.
  void add(std::vector<double> key, std::vector<std::string> cells);
  std::string str() const;
  std::size_t size() const { return rows_.size(); }

 private:
  struct Row {
    std::vector<double> key;
    std::vector<std::string> cells;
  };
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

// tool, version, potential descriptor and its hash, tolerances, extra fields.
nlohmann::json meta(const PotentialSpec& spec, const ode::Tolerance& tol, const nlohmann::json& extra = {});

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
// Writes path and path + ".meta.json".
void write_csv(const std::filesystem::path& path, const CsvTable& table, const nlohmann::json& meta_block);

// k, w, s-, s+, t, r-, r+ (re/im pairs) and | |r-|^2 + |t|^2 - 1 |.
CsvTable scatter_table(const std::vector<ScatteringData>& rows);

nlohmann::json spectral_point_json(const SpectralPoint& p);

// branch_id, seed_class, k_star_im, E, eps, N, H1, x_L, x_R, sign_L, sign_R, residual.
// Rows are ordered by branch id, then by position along the branch.
CsvTable branch_table(const std::vector<std::pair<std::string, const BranchCurve*>>& curves,
                      const PotentialSpec& spec);

}  // namespace resbif::report
